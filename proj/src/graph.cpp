#include "lmap/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "binary_io.hpp"
#include "text.hpp"

namespace lmap {

using detail::split;
using detail::trim;
using json = nlohmann::json;

CorpusSchema parse_schema(std::string_view name) {
  if (name == "jsonl" || name == "json" || name == "dblp") return CorpusSchema::json_lines;
  if (name == "edgelist" || name == "tsv") return CorpusSchema::edge_list;
  throw UsageError("unknown corpus schema '" + std::string(name) + "' (expected jsonl or edgelist)");
}

std::string_view schema_name(CorpusSchema schema) {
  return schema == CorpusSchema::json_lines ? "jsonl" : "edgelist";
}

// ---------------------------------------------------------------------------
// Corpus parsing

namespace {

std::optional<std::string> json_id(const json& v) {
  if (v.is_string()) {
    auto t = trim(v.get_ref<const std::string&>());
    if (t.empty()) return std::nullopt;
    return std::string(t);
  }
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return std::nullopt;
}

void push_unique(std::vector<std::string>& list, std::unordered_set<std::string>& seen, std::string value) {
  if (value.empty()) return;
  if (seen.insert(value).second) list.push_back(std::move(value));
}

// Returns false when the object does not match the schema.
bool record_from_json(const json& obj, PaperRecord& rec) {
  if (!obj.is_object()) return false;
  auto it = obj.find("id");
  if (it == obj.end()) return false;
  auto id = json_id(*it);
  if (!id) return false;
  rec.id = std::move(*id);

  if (auto t = obj.find("title"); t != obj.end() && t->is_string()) rec.title = t->get<std::string>();

  if (auto y = obj.find("year"); y != obj.end() && !y->is_null()) {
    if (!y->is_number_integer()) return false;
    rec.year = y->get<int>();
  }

  if (auto r = obj.find("references"); r != obj.end() && !r->is_null()) {
    if (!r->is_array()) return false;
    std::unordered_set<std::string> seen;
    for (const auto& ref : *r) {
      auto rid = json_id(ref);
      if (!rid) return false;
      push_unique(rec.references, seen, std::move(*rid));
    }
  }

  std::unordered_set<std::string> seen_kw;
  for (const char* field : {"fos", "keywords"}) {
    auto k = obj.find(field);
    if (k == obj.end() || k->is_null()) continue;
    if (!k->is_array()) return false;
    for (const auto& entry : *k) {
      if (entry.is_string()) {
        push_unique(rec.keywords, seen_kw, std::string(trim(entry.get_ref<const std::string&>())));
      } else if (entry.is_object() && entry.contains("name") && entry["name"].is_string()) {
        push_unique(rec.keywords, seen_kw, std::string(trim(entry["name"].get_ref<const std::string&>())));
      } else {
        return false;
      }
    }
  }
  return true;
}

void note_bad_line(CorpusLoad& load, std::size_t line_no) {
  ++load.skipped;
  if (load.first_bad_line == 0) load.first_bad_line = line_no;
}

}  // namespace

CorpusLoad parse_json_lines(std::istream& in) {
  CorpusLoad load;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    // DBLP dumps wrap the records in a JSON array, one element per line.
    if (body.empty() || body == "[" || body == "]") continue;
    if (body.front() == ',') body = trim(body.substr(1));
    if (!body.empty() && body.back() == ',') body = trim(body.substr(0, body.size() - 1));
    if (body.empty()) continue;

    auto obj = json::parse(body, nullptr, /*allow_exceptions=*/false);
    PaperRecord rec;
    if (obj.is_discarded() || !record_from_json(obj, rec)) {
      note_bad_line(load, line_no);
      continue;
    }
    load.records.push_back(std::move(rec));
  }
  return load;
}

CorpusLoad parse_edge_list(std::istream& edges, std::istream* metadata) {
  CorpusLoad load;
  std::unordered_map<std::string, std::size_t> position;
  auto record_for = [&](std::string_view id) -> PaperRecord& {
    auto [it, inserted] = position.try_emplace(std::string(id), load.records.size());
    if (inserted) {
      load.records.emplace_back();
      load.records.back().id = std::string(id);
    }
    return load.records[it->second];
  };

  std::string line;
  std::size_t line_no = 0;
  if (metadata != nullptr) {
    while (std::getline(*metadata, line)) {
      ++line_no;
      auto body = trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto fields = split(line, '\t');
      auto id = fields.empty() ? std::string_view{} : trim(fields[0]);
      if (id.empty() || fields.size() > 4) {
        note_bad_line(load, line_no);
        continue;
      }
      std::optional<int> year;
      if (fields.size() > 1 && !trim(fields[1]).empty()) {
        auto y = trim(fields[1]);
        int value = 0;
        auto [ptr, ec] = std::from_chars(y.data(), y.data() + y.size(), value);
        if (ec != std::errc() || ptr != y.data() + y.size()) {
          note_bad_line(load, line_no);
          continue;
        }
        year = value;
      }
      auto& rec = record_for(id);
      rec.year = year;
      if (fields.size() > 2) rec.title = std::string(trim(fields[2]));
      if (fields.size() > 3) {
        std::unordered_set<std::string> seen(rec.keywords.begin(), rec.keywords.end());
        for (auto kw : split(fields[3], ';')) push_unique(rec.keywords, seen, std::string(trim(kw)));
      }
    }
  }

  line_no = 0;
  std::unordered_map<std::size_t, std::unordered_set<std::string>> seen_refs;
  while (std::getline(edges, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body, '\t');
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
      note_bad_line(load, line_no);
      continue;
    }
    auto src = trim(fields[0]);
    auto dst = trim(fields[1]);
    record_for(src);
    record_for(dst);
    auto pos = position.at(std::string(src));
    if (seen_refs[pos].insert(std::string(dst)).second) load.records[pos].references.emplace_back(dst);
  }
  return load;
}

CorpusLoad load_corpus(const std::filesystem::path& path, CorpusSchema schema,
                       const std::filesystem::path& metadata) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus file '" + path.string() + "'");
  CorpusLoad load;
  if (schema == CorpusSchema::json_lines) {
    load = parse_json_lines(in);
  } else if (metadata.empty()) {
    load = parse_edge_list(in, nullptr);
  } else {
    std::ifstream meta(metadata);
    if (!meta) throw DataError("cannot read metadata file '" + metadata.string() + "'");
    load = parse_edge_list(in, &meta);
  }
  if (load.records.empty() && load.skipped > 0) {
    throw DataError("'" + path.string() + "' does not match schema " + std::string(schema_name(schema)) +
                    " (line " + std::to_string(load.first_bad_line) + ")");
  }
  return load;
}

// ---------------------------------------------------------------------------
// Graph construction

void NodeTable::push_back(const PaperRecord& record,
                          std::unordered_map<std::string, std::uint32_t>& vocab_index) {
  ids.push_back(record.id);
  years.push_back(record.year ? static_cast<std::int32_t>(*record.year) : kNoYear);
  titles.push_back(record.title);
  std::vector<std::uint32_t> kws;
  kws.reserve(record.keywords.size());
  for (const auto& raw : record.keywords) {
    std::string kw(trim(raw));
    if (kw.empty()) continue;
    auto [it, inserted] = vocab_index.try_emplace(kw, static_cast<std::uint32_t>(vocabulary.size()));
    if (inserted) vocabulary.push_back(std::move(kw));
    kws.push_back(it->second);
  }
  std::sort(kws.begin(), kws.end());
  kws.erase(std::unique(kws.begin(), kws.end()), kws.end());
  keywords.push_back(std::move(kws));
}

namespace {

Adjacency make_adjacency(std::size_t n, const std::vector<Edge>& edges, bool transpose) {
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++adj.offsets[(transpose ? e.target : e.source) + 1];
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(edges.size());
  std::vector<std::uint64_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  // Edges arrive sorted by (source, target), so forward rows come out sorted;
  // backward rows are sorted because sources are visited in increasing order.
  for (const auto& e : edges) {
    NodeId row = transpose ? e.target : e.source;
    adj.targets[cursor[row]++] = transpose ? e.source : e.target;
  }
  return adj;
}

}  // namespace

CitationGraph CitationGraph::from_edges(NodeTable nodes, std::vector<Edge> edges) {
  const auto n = nodes.size();
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) throw DataError("edge endpoint outside node table");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  auto forward = make_adjacency(n, edges, false);
  auto backward = make_adjacency(n, edges, true);
  return from_parts(std::move(nodes), std::move(forward), std::move(backward));
}

CitationGraph CitationGraph::from_parts(NodeTable nodes, Adjacency forward, Adjacency backward) {
  CitationGraph g;
  g.nodes_ = std::move(nodes);
  g.forward_ = std::move(forward);
  g.backward_ = std::move(backward);
  g.rebuild_index();
  return g;
}

void CitationGraph::rebuild_index() {
  index_.clear();
  index_.reserve(nodes_.size());
  for (NodeId v = 0; v < nodes_.size(); ++v) index_.emplace(nodes_.ids[v], v);
  vocab_index_.clear();
  for (std::uint32_t k = 0; k < nodes_.vocabulary.size(); ++k) vocab_index_.emplace(nodes_.vocabulary[k], k);
}

std::optional<NodeId> CitationGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId CitationGraph::index(std::string_view id) const {
  auto v = find(id);
  if (!v) throw UnknownNode(std::string(id));
  return *v;
}

std::optional<std::uint32_t> CitationGraph::keyword_index(std::string_view keyword) const {
  auto it = vocab_index_.find(std::string(keyword));
  if (it == vocab_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> CitationGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < size(); ++v) {
    for (NodeId w : references(v)) out.push_back({v, w});
  }
  return out;
}

CitationGraph CitationGraph::reversed() const {
  return from_parts(nodes_, backward_, forward_);
}

CitationGraph CitationGraph::induced_subgraph(std::span<const NodeId> keep) const {
  std::vector<NodeId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  constexpr NodeId kAbsent = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> remap(size(), kAbsent);
  NodeTable table;
  table.vocabulary = nodes_.vocabulary;
  for (NodeId i = 0; i < sorted.size(); ++i) {
    NodeId v = sorted.at(i);
    remap.at(v) = i;
    table.ids.push_back(nodes_.ids[v]);
    table.years.push_back(nodes_.years[v]);
    table.titles.push_back(nodes_.titles[v]);
    table.keywords.push_back(nodes_.keywords[v]);
  }
  std::vector<Edge> kept;
  for (NodeId v : sorted) {
    for (NodeId w : references(v)) {
      if (remap[w] != kAbsent) kept.push_back({remap[v], remap[w]});
    }
  }
  return from_edges(std::move(table), std::move(kept));
}

CitationGraph CitationGraph::without_edges(std::span<const Edge> removed) const {
  std::vector<Edge> drop(removed.begin(), removed.end());
  std::sort(drop.begin(), drop.end());
  std::vector<Edge> kept;
  kept.reserve(edge_count());
  for (const auto& e : edges()) {
    if (!std::binary_search(drop.begin(), drop.end(), e)) kept.push_back(e);
  }
  return from_edges(nodes_, std::move(kept));
}

BuildResult build_graph(const std::vector<PaperRecord>& records) {
  NodeTable table;
  std::unordered_map<std::string, NodeId> index;
  std::unordered_map<std::string, std::uint32_t> vocab_index;
  index.reserve(records.size());
  for (const auto& rec : records) {
    if (!index.emplace(rec.id, static_cast<NodeId>(table.size())).second) {
      throw DataError("duplicate paper id '" + rec.id + "'");
    }
    table.push_back(rec, vocab_index);
  }
  BuildResult result;
  std::vector<Edge> edges;
  for (NodeId v = 0; v < records.size(); ++v) {
    for (const auto& ref : records[v].references) {
      auto it = index.find(ref);
      if (it == index.end()) {
        ++result.dropped_references;
        continue;
      }
      edges.push_back({v, it->second});
    }
  }
  result.graph = CitationGraph::from_edges(std::move(table), std::move(edges));
  return result;
}

// ---------------------------------------------------------------------------
// Connectivity

CitationGraph largest_weakly_connected_component(const CitationGraph& g) {
  const auto n = g.size();
  if (n == 0) return g;
  std::vector<NodeId> parent(n);
  std::vector<NodeId> comp_size(n, 1);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : g.references(v)) {
      auto a = find(v);
      auto b = find(w);
      if (a == b) continue;
      if (comp_size[a] < comp_size[b]) std::swap(a, b);
      parent[b] = a;
      comp_size[a] += comp_size[b];
    }
  }
  // Scanning in index order means the first root reaching the maximum size
  // owns the smallest node index among the tied components.
  NodeId best_root = find(0);
  std::vector<char> seen(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    auto r = find(v);
    if (seen[r]) continue;
    seen[r] = 1;
    if (comp_size[r] > comp_size[best_root]) best_root = r;
  }
  if (comp_size[best_root] == n) return g;
  std::vector<NodeId> keep;
  keep.reserve(comp_size[best_root]);
  for (NodeId v = 0; v < n; ++v) {
    if (find(v) == best_root) keep.push_back(v);
  }
  return g.induced_subgraph(keep);
}

std::vector<std::uint32_t> strongly_connected_components(const CitationGraph& g, std::uint32_t* count) {
  // Iterative Tarjan.
  const auto n = g.size();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> order(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<NodeId> stack;
  std::vector<char> on_stack(n, 0);
  struct Frame {
    NodeId v;
    std::uint64_t next;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0, components = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    call.push_back({root, g.forward().offsets[root]});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& frame = call.back();
      const auto v = frame.v;
      if (frame.next < g.forward().offsets[v + 1]) {
        NodeId w = g.forward().targets[frame.next++];
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, g.forward().offsets[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        auto parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  if (count != nullptr) *count = components;
  return comp;
}

bool is_acyclic(const CitationGraph& g) {
  const auto n = g.size();
  std::vector<std::uint32_t> indeg(n);
  for (NodeId v = 0; v < n; ++v) indeg[v] = static_cast<std::uint32_t>(g.citations(v).size());
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++visited;
    for (NodeId w : g.references(v)) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return visited == n;
}

namespace {

std::int64_t year_key(const CitationGraph& g, NodeId v) {
  auto y = g.year(v);
  return y ? *y : std::numeric_limits<std::int64_t>::max();
}

}  // namespace

namespace {

// Edges whose endpoints share a strongly connected component, in the
// component graph's node indices.
std::vector<Edge> cyclic_edges(const CitationGraph& g) {
  auto comp = strongly_connected_components(g);
  std::vector<Edge> out;
  for (NodeId v = 0; v < g.size(); ++v) {
    for (NodeId w : g.references(v)) {
      if (comp[v] == comp[w]) out.push_back({v, w});
    }
  }
  return out;
}

}  // namespace

CycleBreakResult break_cycles(const CitationGraph& g) {
  CycleBreakResult result;
  for (auto e : cyclic_edges(g)) {
    if (year_key(g, e.target) > year_key(g, e.source)) result.removed.push_back(e);
  }
  CitationGraph current = result.removed.empty() ? g : g.without_edges(result.removed);

  // Ties on year (or both missing): drop the lexicographically largest edge
  // of every remaining cyclic component, then look again. Only the cyclic
  // core is revisited, as a small graph of its own.
  std::vector<Edge> core = cyclic_edges(current);
  std::vector<NodeId> members;
  for (auto e : core) {
    members.push_back(e.source);
    members.push_back(e.target);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::unordered_map<NodeId, NodeId> local;
  NodeTable table;
  std::unordered_map<std::string, std::uint32_t> vocab;
  for (NodeId v : members) {
    local.emplace(v, static_cast<NodeId>(table.size()));
    PaperRecord rec;
    rec.id = g.id(v);
    table.push_back(rec, vocab);
  }
  for (auto& e : core) e = {local.at(e.source), local.at(e.target)};

  std::vector<Edge> tie_removed;
  while (!core.empty()) {
    auto sub = CitationGraph::from_edges(table, core);
    std::uint32_t count = 0;
    auto comp = strongly_connected_components(sub, &count);
    std::vector<std::optional<Edge>> worst(count);
    for (auto e : core) {
      if (comp[e.source] != comp[e.target]) continue;
      auto& slot = worst[comp[e.source]];
      auto key = std::tie(sub.id(e.source), sub.id(e.target));
      if (!slot || key > std::tie(sub.id(slot->source), sub.id(slot->target))) slot = e;
    }
    std::vector<Edge> batch;
    for (const auto& e : worst) {
      if (e) batch.push_back(*e);
    }
    if (batch.empty()) break;
    tie_removed.insert(tie_removed.end(), batch.begin(), batch.end());
    core = cyclic_edges(sub.without_edges(batch));
  }
  if (!tie_removed.empty()) {
    std::vector<Edge> mapped;
    for (auto e : tie_removed) mapped.push_back({members[e.source], members[e.target]});
    current = current.without_edges(mapped);
    result.removed.insert(result.removed.end(), mapped.begin(), mapped.end());
  }
  std::sort(result.removed.begin(), result.removed.end());
  result.graph = std::move(current);
  return result;
}

// ---------------------------------------------------------------------------
// Neighborhoods

namespace {

template <typename Neighbors>
std::vector<NodeId> expand(const CitationGraph& g, NodeId v, unsigned k, Neighbors neighbors) {
  if (k == 0) throw UsageError("neighborhood order k must be at least 1");
  if (v >= g.size()) throw UnknownNode("#" + std::to_string(v));
  std::unordered_set<NodeId> seen{v};
  std::vector<NodeId> frontier{v}, next, out;
  for (unsigned depth = 0; depth < k && !frontier.empty(); ++depth) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId w : neighbors(u)) {
        if (seen.insert(w).second) {
          next.push_back(w);
          out.push_back(w);
        }
      }
    }
    std::swap(frontier, next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<NodeId> extended_references(const CitationGraph& g, NodeId v, unsigned k) {
  return expand(g, v, k, [&](NodeId u) { return g.references(u); });
}

std::vector<NodeId> extended_citations(const CitationGraph& g, NodeId v, unsigned k) {
  return expand(g, v, k, [&](NodeId u) { return g.citations(u); });
}

// ---------------------------------------------------------------------------
// Binary snapshot

namespace {

void write_adjacency(std::ostream& out, const Adjacency& adj) {
  detail::write_le_array<std::uint64_t>(out, adj.offsets);
  detail::write_le_array<NodeId>(out, adj.targets);
}

Adjacency read_adjacency(std::istream& in, std::uint64_t n, std::uint64_t m) {
  Adjacency adj;
  adj.offsets.resize(n + 1);
  adj.targets.resize(m);
  detail::read_le_array<std::uint64_t>(in, adj.offsets, "adjacency offsets");
  detail::read_le_array<NodeId>(in, adj.targets, "adjacency targets");
  if (adj.offsets.front() != 0 || adj.offsets.back() != m || !std::is_sorted(adj.offsets.begin(), adj.offsets.end())) {
    throw DataError("corrupt adjacency offsets in graph snapshot");
  }
  for (NodeId t : adj.targets) {
    if (t >= n) throw DataError("corrupt adjacency target in graph snapshot");
  }
  return adj;
}

}  // namespace

void write_graph(const CitationGraph& g, std::ostream& out) {
  out.write("LMG1", 4);
  detail::write_le<std::uint64_t>(out, g.size());
  detail::write_le<std::uint64_t>(out, g.edge_count());
  write_adjacency(out, g.forward());
  write_adjacency(out, g.backward());

  const auto& nodes = g.nodes();
  out.write("META", 4);
  detail::write_le<std::uint64_t>(out, nodes.vocabulary.size());
  for (const auto& kw : nodes.vocabulary) detail::write_string(out, kw);
  for (NodeId v = 0; v < g.size(); ++v) {
    detail::write_string(out, nodes.ids[v]);
    detail::write_le<std::int32_t>(out, nodes.years[v]);
    detail::write_string(out, nodes.titles[v]);
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(nodes.keywords[v].size()));
    detail::write_le_array<std::uint32_t>(out, nodes.keywords[v]);
  }
}

CitationGraph read_graph(std::istream& in) {
  detail::expect_magic(in, "LMG1");
  auto n = detail::read_le<std::uint64_t>(in, "node count");
  auto m = detail::read_le<std::uint64_t>(in, "edge count");
  auto forward = read_adjacency(in, n, m);
  auto backward = read_adjacency(in, n, m);

  detail::expect_magic(in, "META");
  NodeTable nodes;
  auto vocab = detail::read_le<std::uint64_t>(in, "vocabulary size");
  nodes.vocabulary.reserve(vocab);
  for (std::uint64_t i = 0; i < vocab; ++i) nodes.vocabulary.push_back(detail::read_string(in, "keyword"));
  nodes.ids.reserve(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    nodes.ids.push_back(detail::read_string(in, "id"));
    nodes.years.push_back(detail::read_le<std::int32_t>(in, "year"));
    nodes.titles.push_back(detail::read_string(in, "title"));
    std::vector<std::uint32_t> kws(detail::read_le<std::uint32_t>(in, "keyword count"));
    detail::read_le_array<std::uint32_t>(in, kws, "keywords");
    for (auto k : kws) {
      if (k >= vocab) throw DataError("corrupt keyword index in graph snapshot");
    }
    nodes.keywords.push_back(std::move(kws));
  }
  return CitationGraph::from_parts(std::move(nodes), std::move(forward), std::move(backward));
}

void save_graph(const CitationGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write graph snapshot '" + path.string() + "'");
  write_graph(g, out);
  if (!out) throw DataError("failed writing graph snapshot '" + path.string() + "'");
}

CitationGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read graph snapshot '" + path.string() + "'");
  return read_graph(in);
}

}  // namespace lmap
