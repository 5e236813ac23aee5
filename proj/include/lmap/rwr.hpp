#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lmap/graph.hpp"
#include "lmap/matrix.hpp"

namespace lmap {

// Depth-truncated random walks over the reference neighborhood.
//
// A unit of mass starts on the source and, at every step, each node splits
// the mass it holds equally among its references. Nodes without references
// keep what reaches them and forward nothing. The weight of node b is the
// decay-weighted sum of the mass b holds after 1..horizon steps:
//
//   W_b = sum_{s=1..t} decay^s * m_s(b)
//
// With decay = 1 and horizon = 1 the weights are uniform over R(a), which
// makes the weighted cosine collapse to the plain set cosine.

enum class LevelAggregation {
  sum,          ///< sum of all levels 1..horizon
  final_level,  ///< only the mass present after exactly `horizon` steps
};

enum class WalkDirection { references, citations };

inline constexpr unsigned kMaxHorizon = 8;

struct WalkParams {
  unsigned horizon = 3;
  double decay = 1.0;
  LevelAggregation aggregation = LevelAggregation::sum;
};

/// Throws UsageError unless 1 <= horizon <= kMaxHorizon and 0 < decay <= 1.
void validate(const WalkParams& params);

/// Sparse diffusion weights of one source, sorted by node.
struct WeightVector {
  NodeId source = 0;
  unsigned horizon = 0;
  double decay = 1.0;
  std::vector<NodeId> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  bool empty() const noexcept { return nodes.empty(); }
  /// 0 for nodes outside the support.
  double weight(NodeId v) const;
  double squared_norm() const;
};

/// Sparse mass distribution after one walk step: (node, mass) sorted by node.
using LevelMass = std::vector<std::pair<NodeId, double>>;

/// m_0 .. m_horizon for source `a` (m_0 is the unit mass on `a`).
std::vector<LevelMass> rwr_levels(const CitationGraph& g, NodeId a, unsigned horizon);

/// Reusable dense scratch space; one per thread.
class WalkWorkspace {
 public:
  explicit WalkWorkspace(std::size_t node_count);

  WeightVector run(const Adjacency& adjacency, NodeId source, const WalkParams& params);

 private:
  std::vector<double> current_, next_, total_;
  std::vector<NodeId> current_list_, next_list_, total_list_;
  std::vector<char> in_next_, in_total_;
};

WeightVector rwr_weights(const CitationGraph& g, NodeId a, const WalkParams& params);

/// Cosine over the weighted supports; 0 when either vector is empty.
double weighted_cosine(const WeightVector& a, const WeightVector& b);

double wbc_similarity(const CitationGraph& g, NodeId a, NodeId b, const WalkParams& params);

/// Weight vectors of every sample node, computed in parallel.
std::vector<WeightVector> weight_vectors(const CitationGraph& g, std::span<const NodeId> sample,
                                         const WalkParams& params, WalkDirection direction);

/// All-pairs weighted cosine through an inverted node -> source index.
/// Unit diagonal, exactly symmetric.
PairwiseMatrix cosine_matrix(std::vector<std::string> ids, std::span<const WeightVector> vectors);

/// Weighted coupling matrix over `sample`. Throws on duplicate sample ids or
/// fewer than two sample nodes.
PairwiseMatrix pairwise_similarity(const CitationGraph& g, std::span<const NodeId> sample, const WalkParams& params,
                                   WalkDirection direction = WalkDirection::references);

/// Unweighted coupling baseline: set cosine of R^k (or C^k) neighborhoods.
PairwiseMatrix pairwise_set_cosine(const CitationGraph& g, std::span<const NodeId> sample, unsigned k,
                                   WalkDirection direction = WalkDirection::references);

}  // namespace lmap
