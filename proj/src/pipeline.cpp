#include "lmap/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "lmap/errors.hpp"
#include "lmap/hash.hpp"
#include "lmap/keywords.hpp"
#include "lmap/plot.hpp"
#include "lmap/version.hpp"
#include "text.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace lmap {

namespace {

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size())
    throw UsageError(fmt::format("{}: expected an integer, got '{}'", key, value));
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size())
    throw UsageError(fmt::format("{}: expected a number, got '{}'", key, value));
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw UsageError(fmt::format("{}: expected true or false, got '{}'", key, value));
}

std::string_view aggregation_name(LevelAggregation a) { return a == LevelAggregation::sum ? "sum" : "final"; }
std::string_view direction_name(WalkDirection d) { return d == WalkDirection::references ? "references" : "citations"; }
std::string_view reading_name(BandwidthReading r) {
  return r == BandwidthReading::mean_of_means ? "mean" : "kth";
}

constexpr std::string_view kKeys[] = {
    "corpus",     "schema",        "metadata",     "out",        "cache",          "selector",
    "keyword",    "n",             "seed",         "t",          "alpha",          "aggregation",
    "direction",  "bc_baseline",   "epsilon",      "perplexity", "iterations",     "bandwidth",
    "bandwidth_k", "bandwidth_reading", "ratio_min_occ", "cluster_min_occ", "jitter", "plot_keywords",
    "compare_t",
};

}  // namespace

std::vector<std::string_view> PipelineConfig::keys() { return {std::begin(kKeys), std::end(kKeys)}; }

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  auto value = detail::trim(raw);
  if (key == "corpus") {
    corpus = std::string(value);
  } else if (key == "schema") {
    schema = parse_schema(value);
  } else if (key == "metadata") {
    metadata = std::string(value);
  } else if (key == "out") {
    output_dir = std::string(value);
  } else if (key == "cache") {
    cache = std::string(value);
  } else if (key == "selector") {
    if (value == "keyword") selector = SelectorKind::keyword;
    else if (value == "random") selector = SelectorKind::random;
    else throw UsageError(fmt::format("selector: expected keyword or random, got '{}'", value));
  } else if (key == "keyword") {
    keyword = std::string(value);
  } else if (key == "n") {
    sample_size = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "t") {
    walk.horizon = parse_integer<unsigned>(key, value);
  } else if (key == "alpha") {
    walk.decay = parse_double(key, value);
  } else if (key == "aggregation") {
    if (value == "sum") walk.aggregation = LevelAggregation::sum;
    else if (value == "final") walk.aggregation = LevelAggregation::final_level;
    else throw UsageError(fmt::format("aggregation: expected sum or final, got '{}'", value));
  } else if (key == "direction") {
    if (value == "references") direction = WalkDirection::references;
    else if (value == "citations") direction = WalkDirection::citations;
    else throw UsageError(fmt::format("direction: expected references or citations, got '{}'", value));
  } else if (key == "bc_baseline") {
    bc_baseline = parse_bool(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_double(key, value);
  } else if (key == "perplexity") {
    perplexity = parse_double(key, value);
  } else if (key == "iterations") {
    iterations = parse_integer<int>(key, value);
  } else if (key == "bandwidth") {
    if (value == "auto") sigma.reset();
    else sigma = parse_double(key, value);
  } else if (key == "bandwidth_k") {
    bandwidth_k = parse_integer<std::size_t>(key, value);
  } else if (key == "bandwidth_reading") {
    if (value == "mean") bandwidth_reading = BandwidthReading::mean_of_means;
    else if (value == "kth") bandwidth_reading = BandwidthReading::kth_neighbor;
    else throw UsageError(fmt::format("bandwidth_reading: expected mean or kth, got '{}'", value));
  } else if (key == "ratio_min_occ") {
    ratio_min_occ = parse_integer<std::size_t>(key, value);
  } else if (key == "cluster_min_occ") {
    cluster_min_occ = parse_integer<std::size_t>(key, value);
  } else if (key == "jitter") {
    jitter = parse_bool(key, value);
  } else if (key == "plot_keywords") {
    plot_keywords = parse_integer<std::size_t>(key, value);
  } else if (key == "compare_t") {
    compare_horizons.clear();
    for (auto part : detail::split(value, ',')) {
      auto p = detail::trim(part);
      if (!p.empty()) compare_horizons.push_back(parse_integer<unsigned>(key, p));
    }
  } else {
    throw UsageError(fmt::format("unknown configuration key '{}'", key));
  }
}

void PipelineConfig::read(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw UsageError(fmt::format("config line {}: expected 'key = value'", number));
    set(detail::trim(body.substr(0, eq)), body.substr(eq + 1));
  }
}

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig config;
  config.read(in);
  return config;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot read config file {}", path.string()));
  return parse(in);
}

std::string PipelineConfig::to_text() const {
  std::string horizons;
  for (std::size_t i = 0; i < compare_horizons.size(); ++i)
    horizons += (i ? "," : "") + std::to_string(compare_horizons[i]);
  std::string out;
  auto line = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  line("corpus", corpus.string());
  line("schema", schema_name(schema));
  line("metadata", metadata.string());
  line("out", output_dir.string());
  line("cache", cache.string());
  line("selector", selector == SelectorKind::keyword ? "keyword" : "random");
  line("keyword", keyword);
  line("n", sample_size);
  line("seed", seed);
  line("t", walk.horizon);
  line("alpha", walk.decay);
  line("aggregation", aggregation_name(walk.aggregation));
  line("direction", direction_name(direction));
  line("bc_baseline", bc_baseline ? "true" : "false");
  line("epsilon", epsilon);
  line("perplexity", perplexity);
  line("iterations", iterations);
  line("bandwidth", sigma ? fmt::format("{}", *sigma) : std::string("auto"));
  line("bandwidth_k", bandwidth_k);
  line("bandwidth_reading", reading_name(bandwidth_reading));
  line("ratio_min_occ", ratio_min_occ);
  line("cluster_min_occ", cluster_min_occ);
  line("jitter", jitter ? "true" : "false");
  line("plot_keywords", plot_keywords);
  line("compare_t", horizons);
  return out;
}

void PipelineConfig::validate() const {
  lmap::validate(walk);
  if (selector == SelectorKind::keyword && keyword.empty())
    throw UsageError("selector=keyword requires a keyword");
  if (sample_size < 2) throw UsageError("n must be at least 2");
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (!(perplexity > 1.0)) throw UsageError("perplexity must exceed 1");
  if (iterations < 1) throw UsageError("iterations must be positive");
  if (sigma && !(*sigma > 0.0)) throw UsageError("bandwidth must be positive");
  if (!sigma && bandwidth_k == 0) throw UsageError("bandwidth_k must be positive");
  for (unsigned t : compare_horizons) {
    if (t < 1 || t > kMaxHorizon) throw UsageError(fmt::format("compare_t entries must lie in 1..{}", kMaxHorizon));
  }
}

fs::path PipelineConfig::cache_path() const { return cache.empty() ? output_dir / "graph.lmg" : cache; }

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::sample: return "sample";
    case Stage::similarity: return "similarity";
    case Stage::distance: return "distance";
    case Stage::embed: return "embed";
    case Stage::cluster: return "cluster";
    case Stage::keywords: return "keywords";
    case Stage::plots: return "plots";
  }
  return "unknown";
}

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / artifact::kLock) {
    fs::create_directories(dir);
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST)
        throw UsageError(fmt::format("{} is in use by another run (remove {} if stale)", dir.string(),
                                     path_.string()));
      throw DataError(fmt::format("cannot create {}: {}", path_.string(), std::strerror(errno)));
    }
    auto pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  fs::path path_;
};

class Manifest {
 public:
  explicit Manifest(fs::path dir) : path_(std::move(dir) / artifact::kManifest) {
    std::ifstream in(path_);
    if (!in) return;
    try {
      data_ = json::parse(in);
    } catch (const json::exception&) {
      data_ = json::object();
    }
    if (!data_.is_object()) data_ = json::object();
  }

  std::string key(Stage stage) const {
    auto it = data_.find("stages");
    if (it == data_.end() || !it->is_object()) return {};
    auto s = it->find(std::string(stage_name(stage)));
    if (s == it->end() || !s->contains("key")) return {};
    return (*s)["key"].get<std::string>();
  }

  bool current(Stage stage, const std::string& key, std::span<const fs::path> files) const {
    if (this->key(stage) != key) return false;
    return std::all_of(files.begin(), files.end(), [](const fs::path& p) { return fs::exists(p); });
  }

  void record(Stage stage, const std::string& key, std::span<const fs::path> files) {
    json names = json::array();
    for (const auto& f : files) names.push_back(f.filename().string());
    data_["lmap"] = kVersion;
    data_["stages"][std::string(stage_name(stage))] = {{"key", key}, {"artifacts", names}};
    save();
  }

  void forget(Stage stage) {
    if (data_.contains("stages")) data_["stages"].erase(std::string(stage_name(stage)));
    save();
  }

 private:
  void save() const {
    fs::create_directories(path_.parent_path());
    auto tmp = path_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << data_.dump(2) << '\n';
      if (!out) throw DataError(fmt::format("cannot write {}", path_.string()));
    }
    fs::rename(tmp, path_);
  }

  fs::path path_;
  json data_ = json::object();
};

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  fn(out);
  out.flush();
  if (!out) throw DataError(fmt::format("error while writing {}", path.string()));
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  return in;
}

std::string header_tag(const std::string& key) { return fmt::format("lmap={}\tkey={}", kVersion, key); }

template <typename Fn>
auto run_stage(Stage stage, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(fmt::format("stage {}: {}", stage_name(stage), e.what()));
  } catch (const DataError& e) {
    throw DataError(fmt::format("stage {}: {}", stage_name(stage), e.what()));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("stage {}: {}", stage_name(stage), e.what()));
  }
}

std::string ingest_key(const PipelineConfig& config) {
  Sha256 h;
  h.field("ingest").field(schema_name(config.schema));
  h.field(file_sha256(config.corpus));
  h.field(config.metadata.empty() ? std::string() : file_sha256(config.metadata));
  return h.hex();
}

IngestReport ingest(const PipelineConfig& config, Manifest& manifest, std::ostream& log, std::string& key) {
  IngestReport report;
  if (config.corpus.empty()) {
    if (!fs::exists(config.cache_path()))
      throw UsageError("no corpus configured and no graph cache at " + config.cache_path().string());
    key = Sha256().field("cache").field(file_sha256(config.cache_path())).hex();
    report.up_to_date = true;
    log << "using graph cache " << config.cache_path().string() << '\n';
    return report;
  }
  if (!fs::exists(config.corpus)) throw DataError("corpus file not found: " + config.corpus.string());
  key = ingest_key(config);
  fs::path cache = config.cache_path();
  fs::path files[] = {cache};
  if (manifest.current(Stage::ingest, key, files)) {
    report.up_to_date = true;
    log << "cache up to date (" << cache.string() << ")\n";
    return report;
  }

  auto loaded = load_corpus(config.corpus, config.schema, config.metadata);
  report.records = loaded.records.size();
  report.skipped_lines = loaded.skipped;
  auto built = build_graph(loaded.records);
  loaded.records.clear();
  report.dropped_references = built.dropped_references;
  report.raw_nodes = built.graph.size();
  report.raw_edges = built.graph.edge_count();
  auto component = largest_weakly_connected_component(built.graph);
  built.graph = CitationGraph();
  report.component_nodes = component.size();
  auto broken = break_cycles(component);
  report.removed_edges = broken.removed.size();
  report.nodes = broken.graph.size();
  report.edges = broken.graph.edge_count();

  if (!cache.parent_path().empty()) fs::create_directories(cache.parent_path());
  save_graph(broken.graph, cache);
  manifest.record(Stage::ingest, key, files);

  log << fmt::format("records: {} ({} malformed lines skipped", report.records, report.skipped_lines);
  if (loaded.first_bad_line) log << fmt::format(", first at line {}", loaded.first_bad_line);
  log << ")\n";
  log << fmt::format("dropped references: {}\n", report.dropped_references);
  log << fmt::format("largest component: {} of {} nodes\n", report.component_nodes, report.raw_nodes);
  log << fmt::format("cycle breaking: {} edge{} removed\n", report.removed_edges,
                     report.removed_edges == 1 ? "" : "s");
  log << fmt::format("graph: n={} m={}\n", report.nodes, report.edges);
  log << "cache written to " << cache.string() << '\n';
  return report;
}

std::vector<NodeId> sample_nodes_from(const fs::path& path, const CitationGraph& g) {
  auto in = open_input(path);
  return read_sample(in, g).nodes;
}

std::vector<std::string> ids_of(const CitationGraph& g, std::span<const NodeId> nodes) {
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (NodeId v : nodes) ids.push_back(g.id(v));
  return ids;
}

std::vector<std::string> plot_keyword_choice(const PipelineConfig& config, const CitationGraph& g,
                                             std::span<const NodeId> sample,
                                             const std::vector<KeywordStats>& ranked) {
  std::string_view exclude = config.selector == SelectorKind::keyword ? std::string_view(config.keyword) : "";
  std::vector<std::string> chosen;
  for (const auto& s : ranked) {
    if (chosen.size() >= config.plot_keywords) break;
    chosen.push_back(s.keyword);
  }
  if (chosen.empty() && config.plot_keywords > 0) {
    auto frequent = rank_by_ratio(g, sample, 1, exclude);
    std::stable_sort(frequent.begin(), frequent.end(),
                     [](const KeywordStats& a, const KeywordStats& b) { return a.count_local > b.count_local; });
    for (const auto& s : frequent) {
      if (chosen.size() >= config.plot_keywords) break;
      chosen.push_back(s.keyword);
    }
  }
  return chosen;
}

}  // namespace

IngestReport cmd_ingest(const PipelineConfig& config, std::ostream& log) {
  if (config.corpus.empty()) throw UsageError("ingest requires a corpus");
  DirectoryLock lock(config.output_dir);
  Manifest manifest(config.output_dir);
  std::string key;
  return run_stage(Stage::ingest, [&] { return ingest(config, manifest, log, key); });
}

std::vector<StageRun> cmd_pipeline(const PipelineConfig& config, std::ostream& log, Stage last) {
  config.validate();
  const fs::path out = config.output_dir;
  DirectoryLock lock(out);
  Manifest manifest(out);
  std::vector<StageRun> runs;

  std::string key;
  {
    auto report = run_stage(Stage::ingest, [&] { return ingest(config, manifest, log, key); });
    runs.push_back({Stage::ingest, !report.up_to_date});
  }
  const std::string corpus_key = key;
  if (last == Stage::ingest) return runs;

  const auto graph = run_stage(Stage::ingest, [&] { return load_graph(config.cache_path()); });
  const std::uint64_t sample_seed = derive_seed(config.seed, 1);
  const std::uint64_t embed_seed = derive_seed(config.seed, 2);
  const std::uint64_t plot_seed = derive_seed(config.seed, 3);

  // Each stage hashes its parameters together with the key of its input.
  auto chain = [&](Stage stage, auto&&... parts) {
    Sha256 h;
    h.field(stage_name(stage)).field(kVersion).field(key);
    (h.field(fmt::format("{}", parts)), ...);
    key = h.hex();
    return key;
  };
  auto step = [&](Stage stage, const std::string& stage_key, std::vector<fs::path> files, auto&& build) {
    bool rebuilt = !manifest.current(stage, stage_key, files);
    if (rebuilt) {
      manifest.forget(stage);
      run_stage(stage, build);
      manifest.record(stage, stage_key, files);
      log << "[" << stage_name(stage) << "] built\n";
    } else {
      log << "[" << stage_name(stage) << "] up to date\n";
    }
    runs.push_back({stage, rebuilt});
    return stage != last;
  };

  std::optional<std::vector<NodeId>> sample;
  auto sample_path = out / artifact::kSample;
  auto need_sample = [&]() -> const std::vector<NodeId>& {
    if (!sample) sample = run_stage(Stage::sample, [&] { return sample_nodes_from(sample_path, graph); });
    return *sample;
  };

  // sample
  auto sample_key = chain(Stage::sample, config.selector == SelectorKind::keyword ? "keyword" : "random",
                          config.keyword, config.sample_size, sample_seed);
  bool more = step(Stage::sample, sample_key, {sample_path}, [&] {
    Sample s = config.selector == SelectorKind::keyword
                   ? sample_by_keyword(graph, config.keyword, config.sample_size, sample_seed)
                   : sample_random(graph, config.sample_size, sample_seed);
    if (s.truncated)
      log << fmt::format("note: only {} papers carry '{}' (requested {})\n", s.nodes.size(), config.keyword,
                         config.sample_size);
    if (s.nodes.size() < 2) throw DataError("sample has fewer than two papers");
    write_file(sample_path, [&](std::ostream& o) { write_sample(s, graph, o, corpus_key, header_tag(sample_key)); });
    sample = std::move(s.nodes);
  });
  if (!more) return runs;

  // similarity
  auto sim_path = out / artifact::kSimilarity;
  auto sim_bin = out / artifact::kSimilarityBinary;
  std::vector<fs::path> sim_files{sim_path, sim_bin};
  if (config.bc_baseline) {
    sim_files.push_back(out / artifact::kBaseline);
    sim_files.push_back(out / artifact::kBaselineBinary);
  }
  std::optional<PairwiseMatrix> similarity;
  auto sim_key = chain(Stage::similarity, config.walk.horizon, config.walk.decay,
                       aggregation_name(config.walk.aggregation), direction_name(config.direction),
                       config.bc_baseline);
  more = step(Stage::similarity, sim_key, sim_files, [&] {
    const auto& nodes = need_sample();
    auto header = fmt::format("id_i\tid_j\tsimilarity\t{}", header_tag(sim_key));
    similarity = pairwise_similarity(graph, nodes, config.walk, config.direction);
    write_file(sim_path, [&](std::ostream& o) { write_triples(*similarity, o, header); });
    save_matrix(*similarity, sim_bin);
    if (config.bc_baseline) {
      auto baseline = pairwise_set_cosine(graph, nodes, config.walk.horizon, config.direction);
      write_file(out / artifact::kBaseline, [&](std::ostream& o) { write_triples(baseline, o, header); });
      save_matrix(baseline, out / artifact::kBaselineBinary);
    }
  });
  if (!more) return runs;

  // distance
  auto dist_path = out / artifact::kDistance;
  std::optional<PairwiseMatrix> distance;
  auto dist_key = chain(Stage::distance, config.epsilon);
  more = step(Stage::distance, dist_key, {dist_path}, [&] {
    if (!similarity) similarity = load_matrix(sim_bin, MatrixKind::similarity);
    distance = similarity_to_distance(*similarity, config.epsilon);
    save_matrix(*distance, dist_path);
  });
  similarity.reset();
  if (!more) return runs;

  // embed
  auto embed_path = out / artifact::kEmbedding;
  std::optional<Embedding> embedding;
  auto embed_key = chain(Stage::embed, config.perplexity, config.iterations, embed_seed);
  more = step(Stage::embed, embed_key, {embed_path}, [&] {
    if (!distance) distance = load_matrix(dist_path, MatrixKind::distance);
    TsneOptions options;
    options.perplexity = config.perplexity;
    options.iterations = config.iterations;
    options.seed = embed_seed;
    embedding = tsne_embed(*distance, options);
    if (embedding->unconverged_rows)
      log << fmt::format("note: {} rows did not reach perplexity {}\n", embedding->unconverged_rows,
                         config.perplexity);
    auto header = fmt::format("kl={}\t{}", embedding->kl_divergence, header_tag(embed_key));
    write_file(embed_path, [&](std::ostream& o) { write_embedding(*embedding, o, header); });
  });
  distance.reset();
  if (!more) return runs;
  auto need_embedding = [&]() -> const Embedding& {
    if (!embedding) {
      embedding = run_stage(Stage::embed, [&] {
        auto in = open_input(embed_path);
        return read_embedding(in);
      });
    }
    return *embedding;
  };

  // cluster
  auto labels_path = out / artifact::kLabels;
  std::optional<ClusterLabeling> labeling;
  auto cluster_key = chain(Stage::cluster, config.sigma ? fmt::format("{}", *config.sigma) : std::string("auto"),
                           config.bandwidth_k, reading_name(config.bandwidth_reading));
  more = step(Stage::cluster, cluster_key, {labels_path}, [&] {
    const auto& e = need_embedding();
    double sigma = config.sigma ? *config.sigma : auto_bandwidth(e.points, config.bandwidth_k, config.bandwidth_reading);
    labeling = mean_shift(e.points, sigma);
    log << fmt::format("sigma={} clusters={}\n", sigma, labeling->cluster_count());
    auto header = fmt::format("sigma={}\tclusters={}\t{}", sigma, labeling->cluster_count(), header_tag(cluster_key));
    write_file(labels_path, [&](std::ostream& o) { write_labels(e.ids, *labeling, o, header); });
  });
  if (!more) return runs;
  auto need_labels = [&]() -> const ClusterLabeling& {
    if (!labeling) {
      labeling = run_stage(Stage::cluster, [&] {
        auto in = open_input(labels_path);
        std::vector<std::string> ids;
        auto l = read_labels(in, &ids);
        if (ids != ids_of(graph, need_sample())) throw DataError("labels do not match the sample");
        return l;
      });
    }
    return *labeling;
  };

  // keywords
  auto ratio_path = out / artifact::kRatio;
  auto table_path = out / artifact::kClusterKeywords;
  std::string_view exclude = config.selector == SelectorKind::keyword ? std::string_view(config.keyword) : "";
  auto keywords_key = chain(Stage::keywords, config.ratio_min_occ, config.cluster_min_occ, exclude);
  more = step(Stage::keywords, keywords_key, {ratio_path, table_path}, [&] {
    const auto& nodes = need_sample();
    const auto& l = need_labels();
    auto ranked = rank_by_ratio(graph, nodes, config.ratio_min_occ, exclude);
    write_file(ratio_path, [&](std::ostream& o) { write_ratio_report(ranked, o, header_tag(keywords_key)); });
    auto table = cluster_tfidf(graph, nodes, l.labels, l.cluster_count(), config.cluster_min_occ, exclude);
    write_file(table_path, [&](std::ostream& o) { write_cluster_table(table, o, header_tag(keywords_key)); });
  });
  if (!more) return runs;

  // plots
  auto cluster_plot = out / artifact::kClusterPlot;
  auto keyword_plot = out / artifact::kKeywordPlot;
  auto plots_key = chain(Stage::plots, config.jitter, config.plot_keywords, plot_seed);
  step(Stage::plots, plots_key, {cluster_plot, keyword_plot}, [&] {
    const auto& nodes = need_sample();
    const auto& e = need_embedding();
    const auto& l = need_labels();
    PlotOptions options;
    options.jitter = config.jitter;
    options.seed = plot_seed;
    options.comment = header_tag(plots_key);
    write_file(cluster_plot, [&](std::ostream& o) { write_cluster_plot(e.points, l, o, options); });

    auto ranked = rank_by_ratio(graph, nodes, config.ratio_min_occ, exclude);
    auto chosen = plot_keyword_choice(config, graph, nodes, ranked);
    auto ordered = colocation_order(graph, nodes, l.labels, l.cluster_count(), chosen);
    std::vector<KeywordPanel> panels;
    for (auto& kw : ordered) panels.push_back({kw, keyword_overlay(graph, nodes, kw)});
    write_file(keyword_plot, [&](std::ostream& o) { write_keyword_grid(e.points, panels, o, options); });
  });
  return runs;
}

ConnectivityRow connectivity(const PairwiseMatrix& s) {
  const std::size_t n = s.size();
  ConnectivityRow row;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t nonzero = 0;
  std::size_t components = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(s(i, j) > 0.0)) continue;
      ++nonzero;
      auto a = find(i), b = find(j);
      if (a != b) {
        parent[std::max(a, b)] = std::min(a, b);
        --components;
      }
    }
  }
  const double pairs = n < 2 ? 0.0 : 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  row.nonzero_fraction = pairs > 0 ? static_cast<double>(nonzero) / pairs : 0.0;
  row.components = components;
  return row;
}

std::vector<ConnectivityRow> cmd_compare(const PipelineConfig& config, std::span<const unsigned> horizons,
                                         std::ostream& log) {
  if (horizons.empty()) throw UsageError("compare needs at least one horizon");
  for (unsigned t : horizons) {
    WalkParams p = config.walk;
    p.horizon = t;
    validate(p);
  }
  cmd_pipeline(config, log, Stage::sample);
  DirectoryLock lock(config.output_dir);
  auto graph = load_graph(config.cache_path());
  auto nodes = sample_nodes_from(config.output_dir / artifact::kSample, graph);
  std::vector<ConnectivityRow> rows;
  for (unsigned t : horizons) {
    WalkParams p = config.walk;
    p.horizon = t;
    auto row = connectivity(pairwise_similarity(graph, nodes, p, config.direction));
    row.horizon = t;
    log << fmt::format("t={} nonzero={:.6f} components={}\n", t, row.nonzero_fraction, row.components);
    rows.push_back(row);
  }
  Manifest manifest(config.output_dir);
  Sha256 key;
  key.field("compare").field(manifest.key(Stage::sample)).field(fmt::format("{}", config.walk.decay))
                 .field(aggregation_name(config.walk.aggregation)).field(direction_name(config.direction));
  for (unsigned t : horizons) key.field(std::to_string(t));
  write_file(config.output_dir / artifact::kCompare, [&](std::ostream& o) {
    o << "# t\tnonzero_fraction\tcomponents\t" << header_tag(key.hex()) << '\n';
    for (const auto& r : rows) o << fmt::format("{}\t{:.12g}\t{}\n", r.horizon, r.nonzero_fraction, r.components);
  });
  return rows;
}

}  // namespace lmap
