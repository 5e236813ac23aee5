#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmap/matrix.hpp"

namespace lmap {

using Point2 = std::array<double, 2>;

/// D = 1/(eps + S) - 1/(eps + 1), zero diagonal. Similarities must lie in
/// [0, 1] (values within 1e-9 outside are clamped); throws DataError otherwise.
PairwiseMatrix similarity_to_distance(const PairwiseMatrix& similarity, double epsilon = 1e-5);

/// Scalar form of the inversion.
double invert_similarity(double s, double epsilon = 1e-5);

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  double exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  /// Defaults to max(n / 12, 50).
  std::optional<double> learning_rate;
  double init_scale = 1e-4;
  std::uint64_t seed = 0;
};

struct Embedding {
  std::vector<std::string> ids;
  std::vector<Point2> points;
  TsneOptions config;
  double kl_divergence = 0.0;
  /// Rows whose binary search could not reach the target perplexity
  /// (e.g. more zero-distance duplicates than the perplexity).
  std::size_t unconverged_rows = 0;
};

struct ConditionalProbabilities {
  std::size_t n = 0;
  std::vector<double> p;  ///< row-major p_{j|i}, zero diagonal
  std::vector<double> beta;
  std::size_t unconverged = 0;
};

/// Per-row Gaussian conditionals over the given distances with the
/// precision found by bisection so that exp(H_i) matches `perplexity`.
/// Throws UsageError unless 1 < perplexity <= n - 1.
ConditionalProbabilities conditional_probabilities(const PairwiseMatrix& distances, double perplexity);

/// Symmetrized joint distribution (p_{j|i} + p_{i|j}) / 2n.
std::vector<double> joint_probabilities(const ConditionalProbabilities& conditional);

/// KL(P || Q) for the Student-t map kernel; writes dKL/dY into `gradient`
/// when non-empty.
double kl_divergence(std::span<const double> joint, std::span<const Point2> points,
                     std::span<Point2> gradient = {});

/// Exact t-SNE on a precomputed distance matrix. Deterministic for a given
/// seed and thread count independent.
Embedding tsne_embed(const PairwiseMatrix& distances, const TsneOptions& options = {});

enum class BandwidthReading {
  mean_of_means,  ///< mean distance to the k nearest neighbors, averaged
  kth_neighbor,   ///< distance to the k-th nearest neighbor, averaged
};

/// Throws UsageError when k == 0 or k >= n, DataError when the result is 0.
double auto_bandwidth(std::span<const Point2> points, std::size_t k,
                      BandwidthReading reading = BandwidthReading::mean_of_means);

struct MeanShiftOptions {
  double tolerance = 1e-4;   ///< times sigma
  int max_iterations = 500;
  double merge_radius = 0.5;  ///< times sigma
};

struct ClusterLabeling {
  std::vector<int> labels;    ///< 0..k-1, cluster 0 is the largest
  std::vector<Point2> modes;  ///< one per cluster
  double bandwidth = 0.0;

  std::size_t cluster_count() const noexcept { return modes.size(); }
  std::vector<std::size_t> cluster_sizes() const;
};

/// Gaussian-kernel mean shift started from every point; converged positions
/// closer than merge_radius * sigma share a mode.
ClusterLabeling mean_shift(std::span<const Point2> points, double sigma, const MeanShiftOptions& options = {});

/// Displacement norms of successive mean-shift steps starting at points[start].
std::vector<double> mean_shift_trace(std::span<const Point2> points, double sigma, std::size_t start,
                                     const MeanShiftOptions& options = {});

void write_embedding(const Embedding& e, std::ostream& out, std::string_view header = {});
Embedding read_embedding(std::istream& in);
void write_labels(const std::vector<std::string>& ids, const ClusterLabeling& labeling, std::ostream& out,
                  std::string_view header = {});
/// Labels in file order; modes are not stored, so only labels and
/// cluster_count are meaningful on the result.
ClusterLabeling read_labels(std::istream& in, std::vector<std::string>* ids = nullptr);

}  // namespace lmap
