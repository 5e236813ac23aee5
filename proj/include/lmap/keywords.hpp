#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmap/graph.hpp"

namespace lmap {

struct KeywordStats {
  std::string keyword;
  std::size_t count_local = 0;   ///< papers in the sample carrying the keyword
  std::size_t count_global = 0;  ///< papers in the whole graph carrying it
  double r_local = 0.0;
  double r_global = 0.0;
  double ratio = 0.0;  ///< r_local / r_global
};

/// Fraction of `docs` tagged with `keyword` (document frequency).
/// Throws UsageError on an empty document set.
double keyword_frequency(const CitationGraph& g, std::span<const NodeId> docs, std::string_view keyword);

/// Keywords with count_local >= min_occ ordered by local/global frequency
/// ratio (descending), then count_local (descending), then name.
/// `exclude` (typically the sampling keyword) is left out.
std::vector<KeywordStats> rank_by_ratio(const CitationGraph& g, std::span<const NodeId> sample, std::size_t min_occ,
                                        std::string_view exclude = {});

struct ScoredKeyword {
  std::string keyword;
  double score = 0.0;
  std::size_t count = 0;  ///< occurrences inside the cluster
};

struct ClusterKeywordTable {
  /// Per cluster: keywords assigned to it, by decreasing TF-IDF.
  std::vector<std::vector<ScoredKeyword>> clusters;
  /// keyword -> the single cluster it was assigned to.
  std::map<std::string, int> assignment;
  /// Cluster indices that had no documents.
  std::vector<int> empty_clusters;
};

/// Per-cluster term frequency: occurrences of each keyword over all keyword
/// occurrences in the cluster. Keys are vocabulary indices.
std::vector<std::map<std::uint32_t, double>> cluster_term_frequencies(const CitationGraph& g,
                                                                      std::span<const NodeId> sample,
                                                                      std::span<const int> labels,
                                                                      std::size_t cluster_count);

/// TF-IDF with clusters as documents: idf = ln(k / df) over the k non-empty
/// clusters. Keywords occurring fewer than `min_occ` times in the sample are
/// dropped; each remaining keyword goes to its best-scoring cluster (lower
/// index on ties) when that score is positive.
ClusterKeywordTable cluster_tfidf(const CitationGraph& g, std::span<const NodeId> sample, std::span<const int> labels,
                                  std::size_t cluster_count, std::size_t min_occ = 20, std::string_view exclude = {});

/// Sample positions of the papers tagged with `keyword`; DataError when no
/// sampled paper carries it.
std::vector<std::size_t> keyword_overlay(const CitationGraph& g, std::span<const NodeId> sample,
                                         std::string_view keyword);

/// Papers per cluster carrying `keyword`.
std::vector<double> cluster_occupancy(const CitationGraph& g, std::span<const NodeId> sample,
                                      std::span<const int> labels, std::size_t cluster_count,
                                      std::string_view keyword);

/// Cosine between two occupancy vectors.
double colocation_similarity(std::span<const double> a, std::span<const double> b);

/// Greedy nearest-neighbor chain over co-location similarity, starting from
/// the most frequent keyword.
std::vector<std::string> colocation_order(const CitationGraph& g, std::span<const NodeId> sample,
                                          std::span<const int> labels, std::size_t cluster_count,
                                          std::span<const std::string> keywords);

void write_ratio_report(const std::vector<KeywordStats>& stats, std::ostream& out, std::string_view header = {});
void write_cluster_table(const ClusterKeywordTable& table, std::ostream& out, std::string_view header = {});

}  // namespace lmap
