#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmap/errors.hpp"

namespace lmap {

/// Dense node index assigned at build time.
using NodeId = std::uint32_t;

/// One bibliographic item as read from a corpus file.
struct PaperRecord {
  std::string id;
  std::optional<int> year;
  std::string title;
  std::vector<std::string> keywords;
  std::vector<std::string> references;
};

enum class CorpusSchema {
  json_lines,  ///< one JSON object per line (DBLP v12 layout)
  edge_list,   ///< "src<TAB>dst" lines plus optional metadata table
};

CorpusSchema parse_schema(std::string_view name);
std::string_view schema_name(CorpusSchema schema);

struct CorpusLoad {
  std::vector<PaperRecord> records;
  std::size_t skipped = 0;
  /// 1-based line number of the first malformed line, 0 if none.
  std::size_t first_bad_line = 0;
};

/// Reads a corpus file. Malformed records are skipped and counted; an
/// unreadable file or a file where no line matches the schema throws DataError.
CorpusLoad load_corpus(const std::filesystem::path& path, CorpusSchema schema,
                       const std::filesystem::path& metadata = {});

CorpusLoad parse_json_lines(std::istream& in);

/// Metadata lines are "id<TAB>year<TAB>title<TAB>kw1;kw2;...", year may be empty.
CorpusLoad parse_edge_list(std::istream& edges, std::istream* metadata);

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Per-node metadata carried alongside the adjacency.
struct NodeTable {
  static constexpr std::int32_t kNoYear = std::numeric_limits<std::int32_t>::min();

  std::vector<std::string> ids;
  std::vector<std::int32_t> years;
  std::vector<std::string> titles;
  std::vector<std::vector<std::uint32_t>> keywords;  ///< sorted indices into vocabulary
  std::vector<std::string> vocabulary;

  std::size_t size() const noexcept { return ids.size(); }
  void push_back(const PaperRecord& record, std::unordered_map<std::string, std::uint32_t>& vocab_index);
};

/// Compressed sparse rows, targets sorted within each row.
struct Adjacency {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> row(NodeId v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

/// Immutable citation graph: edges point from the citing paper to the cited one.
class CitationGraph {
 public:
  CitationGraph() = default;

  /// Builds forward and backward adjacency from an edge list. Duplicate edges
  /// are collapsed; endpoints must be valid indices into `nodes`.
  static CitationGraph from_edges(NodeTable nodes, std::vector<Edge> edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return forward_.targets.size(); }
  bool empty() const noexcept { return nodes_.size() == 0; }

  const NodeTable& nodes() const noexcept { return nodes_; }
  const std::string& id(NodeId v) const { return nodes_.ids[v]; }
  std::optional<int> year(NodeId v) const {
    auto y = nodes_.years[v];
    return y == NodeTable::kNoYear ? std::nullopt : std::optional<int>(y);
  }
  const std::string& title(NodeId v) const { return nodes_.titles[v]; }
  std::span<const std::uint32_t> keywords(NodeId v) const { return nodes_.keywords[v]; }
  const std::vector<std::string>& keyword_vocabulary() const noexcept { return nodes_.vocabulary; }
  std::optional<std::uint32_t> keyword_index(std::string_view keyword) const;

  std::optional<NodeId> find(std::string_view id) const;
  /// Throws UnknownNode.
  NodeId index(std::string_view id) const;

  /// R(a): papers cited by v.
  std::span<const NodeId> references(NodeId v) const { return forward_.row(v); }
  /// C(a): papers citing v.
  std::span<const NodeId> citations(NodeId v) const { return backward_.row(v); }

  const Adjacency& forward() const noexcept { return forward_; }
  const Adjacency& backward() const noexcept { return backward_; }

  std::vector<Edge> edges() const;

  /// Same nodes, every edge flipped; references and citations swap.
  CitationGraph reversed() const;

  /// Subgraph induced on `keep` (any order, duplicates ignored); node order preserved.
  CitationGraph induced_subgraph(std::span<const NodeId> keep) const;

  CitationGraph without_edges(std::span<const Edge> removed) const;

  static CitationGraph from_parts(NodeTable nodes, Adjacency forward, Adjacency backward);

 private:
  void rebuild_index();

  NodeTable nodes_;
  Adjacency forward_;
  Adjacency backward_;
  std::unordered_map<std::string, NodeId> index_;
  std::unordered_map<std::string, std::uint32_t> vocab_index_;
};

struct BuildResult {
  CitationGraph graph;
  std::size_t dropped_references = 0;
};

/// One node per record, one edge per reference whose target exists.
/// Throws DataError on duplicate ids.
BuildResult build_graph(const std::vector<PaperRecord>& records);

/// Induced subgraph on the largest weakly connected component. Ties go to the
/// component holding the smallest node index.
CitationGraph largest_weakly_connected_component(const CitationGraph& g);

struct CycleBreakResult {
  CitationGraph graph;
  std::vector<Edge> removed;  ///< in the input graph's node indices
};

/// Removes edges inside strongly connected components until the graph is
/// acyclic. First every intra-component edge pointing to a strictly newer
/// paper goes (missing years sort after known ones); remaining cycles lose
/// their lexicographically largest (source id, target id) edge one at a time.
CycleBreakResult break_cycles(const CitationGraph& g);

/// Strongly connected component index per node (components numbered in
/// reverse topological order of the condensation).
std::vector<std::uint32_t> strongly_connected_components(const CitationGraph& g, std::uint32_t* count = nullptr);

bool is_acyclic(const CitationGraph& g);

/// R^k(v), sorted. Throws UsageError for k == 0. Never contains v.
std::vector<NodeId> extended_references(const CitationGraph& g, NodeId v, unsigned k);
/// C^k(v), sorted.
std::vector<NodeId> extended_citations(const CitationGraph& g, NodeId v, unsigned k);

/// Binary snapshot: "LMG1", u64 n, u64 m, forward offsets/targets, backward
/// offsets/targets, then a "META" block with ids, years, titles and keywords.
void save_graph(const CitationGraph& g, const std::filesystem::path& path);
CitationGraph load_graph(const std::filesystem::path& path);
void write_graph(const CitationGraph& g, std::ostream& out);
CitationGraph read_graph(std::istream& in);

}  // namespace lmap
