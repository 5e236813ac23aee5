#pragma once

#include <span>
#include <vector>

#include "lmap/graph.hpp"

namespace lmap {

enum class CouplingDirection { bibliographic, cocitation };

struct CoupledSet {
  NodeId source = 0;
  std::vector<NodeId> partners;  ///< sorted, never contains source
  unsigned order = 1;
  CouplingDirection direction = CouplingDirection::bibliographic;
};

/// BC^k(a): union of C^k(b) over b in R^k(a), source removed.
CoupledSet bc_set(const CitationGraph& g, NodeId a, unsigned k);

/// CC^k(a): union of R^k(b) over b in C^k(a), source removed.
CoupledSet cc_set(const CitationGraph& g, NodeId a, unsigned k);

// Set measures over sorted, duplicate-free node lists.
std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b);
double cosine_sim(std::span<const NodeId> a, std::span<const NodeId> b);
/// Two empty sets compare as 0.
double jaccard_sim(std::span<const NodeId> a, std::span<const NodeId> b);

enum class SetMeasure { cosine, jaccard };

/// Measure applied to R^k(a) and R^k(b).
double bc_similarity(const CitationGraph& g, NodeId a, NodeId b, unsigned k, SetMeasure measure);

}  // namespace lmap
