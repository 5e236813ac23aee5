#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the code under test except to build graphs and read adjacency.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lmap/graph.hpp"
#include "lmap/mapping.hpp"

namespace oracle {

using lmap::CitationGraph;
using lmap::NodeId;
using lmap::PaperRecord;

/// Record with the given id and references (no year, no keywords).
PaperRecord paper(std::string id, std::vector<std::string> refs = {}, std::vector<std::string> keywords = {},
                  std::optional<int> year = std::nullopt);

/// Graph straight from records; throws if references dangle.
CitationGraph graph_of(const std::vector<PaperRecord>& records);

/// Seeded random DAG on n nodes "v0".."v{n-1}": node i cites only nodes with a
/// smaller index, out-degree uniform in [0, 2 * mean_degree].
CitationGraph random_dag(std::size_t n, double mean_degree, std::uint64_t seed);

/// Layered DAG in which every node outside the last layer cites at least one
/// node of the next layer. Layer 0 holds the single node L0_0, which always
/// cites L1_0; with_sink adds a reference from L1_0 to a node without references.
CitationGraph layered_dag(std::size_t layers, std::size_t width, std::uint64_t seed, bool with_sink = false);

/// R^k(a) by direct evaluation of R^k(a) = R(a) ∪ ⋃_{b ∈ R(a)} R^{k-1}(b).
std::set<NodeId> reach_recursive(const CitationGraph& g, NodeId a, unsigned k, bool backward = false);

/// All nodes reachable from a by a non-empty path (plain BFS).
std::set<NodeId> reach_bfs(const CitationGraph& g, NodeId a);

/// Enumerates every directed path of length 1..t from a and accumulates
/// decay^s * prod(1 / |R(c)|) over the path's interior nodes. With
/// final_only, only paths of length exactly t count.
std::map<NodeId, double> path_weights(const CitationGraph& g, NodeId a, unsigned t, double decay,
                                      bool final_only = false);

/// Per-level sums of the path mass (index s = path length), levels 0..t.
std::vector<double> path_level_sums(const CitationGraph& g, NodeId a, unsigned t);

double cosine(const std::map<NodeId, double>& a, const std::map<NodeId, double>& b);
double set_cosine(const std::set<NodeId>& a, const std::set<NodeId>& b);
double set_jaccard(const std::set<NodeId>& a, const std::set<NodeId>& b);

/// True when no depth-first search finds a back edge.
bool dfs_acyclic(const CitationGraph& g);

/// Central differences of the t-SNE objective with respect to every coordinate.
std::vector<lmap::Point2> numeric_gradient(const std::vector<double>& joint, std::vector<lmap::Point2> points,
                                           double step);

/// KL(P || Q) with the Student-t kernel, computed naively.
double naive_kl(const std::vector<double>& joint, const std::vector<lmap::Point2>& points);

}  // namespace oracle
