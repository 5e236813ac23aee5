#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmap/graph.hpp"
#include "lmap/mapping.hpp"
#include "lmap/rwr.hpp"
#include "lmap/sampling.hpp"

namespace lmap {

/// Every knob of the pipeline. The text form is "key = value" per line with
/// '#' comments; `to_text` writes every key so parse(to_text()) is lossless.
struct PipelineConfig {
  std::filesystem::path corpus;
  CorpusSchema schema = CorpusSchema::json_lines;
  std::filesystem::path metadata;
  std::filesystem::path output_dir = "lmap-out";
  std::filesystem::path cache;  ///< defaults to <output_dir>/graph.lmg

  SelectorKind selector = SelectorKind::keyword;
  std::string keyword;
  std::size_t sample_size = 4000;
  std::uint64_t seed = 42;

  WalkParams walk;
  WalkDirection direction = WalkDirection::references;
  bool bc_baseline = false;

  double epsilon = 1e-5;
  double perplexity = 30.0;
  int iterations = 1000;

  std::optional<double> sigma;  ///< explicit bandwidth; auto when empty
  std::size_t bandwidth_k = 30;
  BandwidthReading bandwidth_reading = BandwidthReading::mean_of_means;

  std::size_t ratio_min_occ = 100;
  std::size_t cluster_min_occ = 20;

  bool jitter = false;
  std::size_t plot_keywords = 20;
  std::vector<unsigned> compare_horizons{1, 2, 3};

  /// Throws UsageError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  void read(std::istream& in);
  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::filesystem::path& path);
  std::string to_text() const;
  /// Range checks shared with the owning modules.
  void validate() const;

  std::filesystem::path cache_path() const;
  static std::vector<std::string_view> keys();
};

struct IngestReport {
  std::size_t records = 0;
  std::size_t skipped_lines = 0;
  std::size_t dropped_references = 0;
  std::size_t raw_nodes = 0;
  std::size_t raw_edges = 0;
  std::size_t component_nodes = 0;
  std::size_t removed_edges = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  bool up_to_date = false;
};

/// load_corpus -> build_graph -> largest component -> break_cycles, written
/// to the graph cache. A no-op when the corpus content hash is unchanged.
IngestReport cmd_ingest(const PipelineConfig& config, std::ostream& log);

enum class Stage { ingest, sample, similarity, distance, embed, cluster, keywords, plots };
std::string_view stage_name(Stage stage);

struct StageRun {
  Stage stage;
  bool rebuilt = false;
};

/// Runs every stage up to and including `last`, reusing artifacts whose
/// input key is unchanged. Holds a lock file in the output directory.
std::vector<StageRun> cmd_pipeline(const PipelineConfig& config, std::ostream& log, Stage last = Stage::plots);

struct ConnectivityRow {
  unsigned horizon = 0;
  double nonzero_fraction = 0.0;  ///< off-diagonal pairs with S > 0
  std::size_t components = 0;     ///< connected components of the S > 0 graph
};

ConnectivityRow connectivity(const PairwiseMatrix& similarity);

/// Similarity connectivity of the configured sample for each horizon.
std::vector<ConnectivityRow> cmd_compare(const PipelineConfig& config, std::span<const unsigned> horizons,
                                         std::ostream& log);

/// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kLock = ".lmap.lock";
inline constexpr const char* kSample = "sample.tsv";
inline constexpr const char* kSimilarity = "similarity.tsv";
inline constexpr const char* kSimilarityBinary = "similarity.lms";
inline constexpr const char* kBaseline = "similarity_bc.tsv";
inline constexpr const char* kBaselineBinary = "similarity_bc.lms";
inline constexpr const char* kDistance = "distance.lms";
inline constexpr const char* kEmbedding = "embedding.tsv";
inline constexpr const char* kLabels = "labels.tsv";
inline constexpr const char* kRatio = "keywords_ratio.tsv";
inline constexpr const char* kClusterKeywords = "keywords_clusters.tsv";
inline constexpr const char* kClusterPlot = "map_clusters.svg";
inline constexpr const char* kKeywordPlot = "map_keywords.svg";
inline constexpr const char* kCompare = "compare.tsv";
}  // namespace artifact

}  // namespace lmap
