#include "lmap/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace lmap {

namespace {

void check_node(const CitationGraph& g, NodeId v) {
  if (v >= g.size()) throw UnknownNode("#" + std::to_string(v));
}

template <typename Outer, typename Inner>
CoupledSet couple(const CitationGraph& g, NodeId a, unsigned k, CouplingDirection dir, Outer outer, Inner inner) {
  check_node(g, a);
  CoupledSet out{.source = a, .partners = {}, .order = k, .direction = dir};
  for (NodeId b : outer(g, a, k)) {
    auto part = inner(g, b, k);
    out.partners.insert(out.partners.end(), part.begin(), part.end());
  }
  std::sort(out.partners.begin(), out.partners.end());
  out.partners.erase(std::unique(out.partners.begin(), out.partners.end()), out.partners.end());
  std::erase(out.partners, a);
  return out;
}

}  // namespace

CoupledSet bc_set(const CitationGraph& g, NodeId a, unsigned k) {
  return couple(g, a, k, CouplingDirection::bibliographic, extended_references, extended_citations);
}

CoupledSet cc_set(const CitationGraph& g, NodeId a, unsigned k) {
  return couple(g, a, k, CouplingDirection::cocitation, extended_citations, extended_references);
}

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double cosine_sim(std::span<const NodeId> a, std::span<const NodeId> b) {
  if (a.empty() || b.empty()) return 0.0;
  auto common = static_cast<double>(intersection_size(a, b));
  return common / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double jaccard_sim(std::span<const NodeId> a, std::span<const NodeId> b) {
  auto common = intersection_size(a, b);
  auto uni = a.size() + b.size() - common;
  if (uni == 0) return 0.0;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double bc_similarity(const CitationGraph& g, NodeId a, NodeId b, unsigned k, SetMeasure measure) {
  check_node(g, a);
  check_node(g, b);
  auto ra = extended_references(g, a, k);
  auto rb = extended_references(g, b, k);
  return measure == SetMeasure::cosine ? cosine_sim(ra, rb) : jaccard_sim(ra, rb);
}

}  // namespace lmap
