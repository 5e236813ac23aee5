#include "lmap/rwr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "lmap/coupling.hpp"

namespace lmap {

void validate(const WalkParams& params) {
  if (params.horizon < 1 || params.horizon > kMaxHorizon) {
    throw UsageError("walk horizon t must be in 1.." + std::to_string(kMaxHorizon) + ", got " +
                     std::to_string(params.horizon));
  }
  if (!(params.decay > 0.0 && params.decay <= 1.0)) {
    throw UsageError("decay factor alpha must be in (0, 1], got " + std::to_string(params.decay));
  }
}

double WeightVector::weight(NodeId v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) return 0.0;
  return weights[static_cast<std::size_t>(it - nodes.begin())];
}

double WeightVector::squared_norm() const {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return s;
}

std::vector<LevelMass> rwr_levels(const CitationGraph& g, NodeId a, unsigned horizon) {
  if (a >= g.size()) throw UnknownNode("#" + std::to_string(a));
  std::vector<LevelMass> levels;
  std::vector<double> mass(g.size(), 0.0), next(g.size(), 0.0);
  mass[a] = 1.0;
  levels.push_back({{a, 1.0}});
  for (unsigned s = 1; s <= horizon; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& [c, m] : levels.back()) {
      auto refs = g.references(c);
      for (NodeId b : refs) next[b] += m / static_cast<double>(refs.size());
    }
    LevelMass level;
    for (NodeId b = 0; b < g.size(); ++b) {
      if (next[b] > 0.0) level.emplace_back(b, next[b]);
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

WalkWorkspace::WalkWorkspace(std::size_t node_count)
    : current_(node_count, 0.0),
      next_(node_count, 0.0),
      total_(node_count, 0.0),
      in_next_(node_count, 0),
      in_total_(node_count, 0) {}

WeightVector WalkWorkspace::run(const Adjacency& adjacency, NodeId source, const WalkParams& params) {
  validate(params);
  if (source >= current_.size()) throw UnknownNode("#" + std::to_string(source));

  current_list_.assign(1, source);
  current_[source] = 1.0;
  double scale = 1.0;
  for (unsigned s = 1; s <= params.horizon; ++s) {
    scale *= params.decay;
    next_list_.clear();
    for (NodeId c : current_list_) {
      const double mass = current_[c];
      current_[c] = 0.0;
      auto refs = adjacency.row(c);
      if (refs.empty()) continue;  // absorbed
      const double share = mass / static_cast<double>(refs.size());
      for (NodeId b : refs) {
        if (!in_next_[b]) {
          in_next_[b] = 1;
          next_list_.push_back(b);
        }
        next_[b] += share;
      }
    }
    for (NodeId b : next_list_) in_next_[b] = 0;

    if (params.aggregation == LevelAggregation::sum || s == params.horizon) {
      for (NodeId b : next_list_) {
        if (!in_total_[b]) {
          in_total_[b] = 1;
          total_list_.push_back(b);
        }
        total_[b] += scale * next_[b];
      }
    }
    std::swap(current_, next_);
    std::swap(current_list_, next_list_);
  }
  for (NodeId b : current_list_) current_[b] = 0.0;
  current_list_.clear();

  std::sort(total_list_.begin(), total_list_.end());
  double largest = 0.0;
  for (NodeId b : total_list_) largest = std::max(largest, total_[b]);
  const double floor = largest * 1e-15;

  WeightVector out{.source = source, .horizon = params.horizon, .decay = params.decay, .nodes = {}, .weights = {}};
  out.nodes.reserve(total_list_.size());
  out.weights.reserve(total_list_.size());
  for (NodeId b : total_list_) {
    const double w = total_[b];
    total_[b] = 0.0;
    in_total_[b] = 0;
    if (b == source || !(w > floor)) continue;
    out.nodes.push_back(b);
    out.weights.push_back(w);
  }
  total_list_.clear();
  return out;
}

WeightVector rwr_weights(const CitationGraph& g, NodeId a, const WalkParams& params) {
  WalkWorkspace ws(g.size());
  return ws.run(g.forward(), a, params);
}

double weighted_cosine(const WeightVector& a, const WeightVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.nodes[i] < b.nodes[j]) {
      ++i;
    } else if (b.nodes[j] < a.nodes[i]) {
      ++j;
    } else {
      dot += a.weights[i++] * b.weights[j++];
    }
  }
  const double denom = std::sqrt(a.squared_norm() * b.squared_norm());
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(dot / denom, 0.0, 1.0);
}

double wbc_similarity(const CitationGraph& g, NodeId a, NodeId b, const WalkParams& params) {
  WalkWorkspace ws(g.size());
  auto wa = ws.run(g.forward(), a, params);
  auto wb = ws.run(g.forward(), b, params);
  return weighted_cosine(wa, wb);
}

namespace {

void check_sample(const CitationGraph& g, std::span<const NodeId> sample) {
  if (sample.size() < 2) throw UsageError("pairwise similarity needs at least two sample nodes");
  std::unordered_set<NodeId> seen;
  for (NodeId v : sample) {
    if (v >= g.size()) throw UnknownNode("#" + std::to_string(v));
    if (!seen.insert(v).second) throw UsageError("duplicate sample id '" + g.id(v) + "'");
  }
}

std::vector<std::string> sample_ids(const CitationGraph& g, std::span<const NodeId> sample) {
  std::vector<std::string> ids;
  ids.reserve(sample.size());
  for (NodeId v : sample) ids.push_back(g.id(v));
  return ids;
}

// Node -> (sample position, value) postings, grouped by node and sorted by
// position inside each group.
struct InvertedIndex {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> positions;
  std::vector<double> values;

  std::pair<std::size_t, std::size_t> group(NodeId v) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    auto g = static_cast<std::size_t>(it - nodes.begin());
    return {offsets[g], offsets[g + 1]};
  }
};

template <typename ValueOf>
InvertedIndex build_index(std::size_t n, const std::vector<std::vector<NodeId>>& supports, ValueOf value_of) {
  struct Posting {
    NodeId node;
    std::uint32_t pos;
    double value;
  };
  std::vector<Posting> postings;
  std::size_t total = 0;
  for (const auto& s : supports) total += s.size();
  postings.reserve(total);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < supports[i].size(); ++k) postings.push_back({supports[i][k], i, value_of(i, k)});
  }
  std::sort(postings.begin(), postings.end(),
            [](const Posting& x, const Posting& y) { return std::tie(x.node, x.pos) < std::tie(y.node, y.pos); });
  InvertedIndex idx;
  idx.positions.reserve(postings.size());
  idx.values.reserve(postings.size());
  for (std::size_t p = 0; p < postings.size(); ++p) {
    if (p == 0 || postings[p].node != postings[p - 1].node) {
      idx.nodes.push_back(postings[p].node);
      idx.offsets.push_back(p);
    }
    idx.positions.push_back(postings[p].pos);
    idx.values.push_back(postings[p].value);
  }
  idx.offsets.push_back(postings.size());
  return idx;
}

// For every row i, accumulates sum over shared nodes of value_i * value_j for
// j > i, then hands the dense accumulator to `finish`.
template <typename Finish>
void accumulate_pairs(const InvertedIndex& idx, const std::vector<std::vector<NodeId>>& supports,
                      const std::vector<std::vector<double>>& row_values, Finish finish) {
  const auto n = static_cast<std::int64_t>(supports.size());
#pragma omp parallel
  {
    std::vector<double> acc(supports.size(), 0.0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t ii = 0; ii < n; ++ii) {
      const auto i = static_cast<std::uint32_t>(ii);
      touched.clear();
      for (std::size_t k = 0; k < supports[i].size(); ++k) {
        const double vi = row_values[i][k];
        auto [begin, end] = idx.group(supports[i][k]);
        auto first = std::upper_bound(idx.positions.begin() + static_cast<std::ptrdiff_t>(begin),
                                      idx.positions.begin() + static_cast<std::ptrdiff_t>(end), i);
        for (auto p = static_cast<std::size_t>(first - idx.positions.begin()); p < end; ++p) {
          const auto j = idx.positions[p];
          if (acc[j] == 0.0) touched.push_back(j);
          acc[j] += vi * idx.values[p];
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      finish(i, touched, acc);
      for (auto j : touched) acc[j] = 0.0;
    }
  }
}

}  // namespace

std::vector<WeightVector> weight_vectors(const CitationGraph& g, std::span<const NodeId> sample,
                                         const WalkParams& params, WalkDirection direction) {
  validate(params);
  for (NodeId v : sample) {
    if (v >= g.size()) throw UnknownNode("#" + std::to_string(v));
  }
  const Adjacency& adj = direction == WalkDirection::references ? g.forward() : g.backward();
  std::vector<WeightVector> out(sample.size());
  const auto n = static_cast<std::int64_t>(sample.size());
#pragma omp parallel
  {
    WalkWorkspace ws(g.size());
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ws.run(adj, sample[static_cast<std::size_t>(i)], params);
  }
  return out;
}

PairwiseMatrix cosine_matrix(std::vector<std::string> ids, std::span<const WeightVector> vectors) {
  const auto n = vectors.size();
  PairwiseMatrix m(std::move(ids), MatrixKind::similarity);
  std::vector<std::vector<NodeId>> supports(n);
  std::vector<std::vector<double>> unit(n);
  for (std::size_t i = 0; i < n; ++i) {
    supports[i] = vectors[i].nodes;
    const double norm = std::sqrt(vectors[i].squared_norm());
    unit[i].reserve(vectors[i].size());
    for (double w : vectors[i].weights) unit[i].push_back(w / norm);
  }
  auto idx = build_index(n, supports, [&](std::uint32_t i, std::size_t k) { return unit[i][k]; });
  accumulate_pairs(idx, supports, unit,
                   [&](std::uint32_t i, const std::vector<std::uint32_t>& touched, const std::vector<double>& acc) {
                     for (auto j : touched) m.set_symmetric(i, j, std::clamp(acc[j], 0.0, 1.0));
                   });
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

PairwiseMatrix pairwise_similarity(const CitationGraph& g, std::span<const NodeId> sample, const WalkParams& params,
                                   WalkDirection direction) {
  validate(params);
  check_sample(g, sample);
  auto vectors = weight_vectors(g, sample, params, direction);
  return cosine_matrix(sample_ids(g, sample), vectors);
}

PairwiseMatrix pairwise_set_cosine(const CitationGraph& g, std::span<const NodeId> sample, unsigned k,
                                   WalkDirection direction) {
  check_sample(g, sample);
  if (k == 0) throw UsageError("neighborhood order k must be at least 1");
  const auto n = sample.size();
  std::vector<std::vector<NodeId>> supports(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto v = sample[static_cast<std::size_t>(i)];
    supports[static_cast<std::size_t>(i)] =
        direction == WalkDirection::references ? extended_references(g, v, k) : extended_citations(g, v, k);
  }
  std::vector<std::vector<double>> ones(n);
  for (std::size_t i = 0; i < n; ++i) ones[i].assign(supports[i].size(), 1.0);
  auto idx = build_index(n, supports, [](std::uint32_t, std::size_t) { return 1.0; });

  PairwiseMatrix m(sample_ids(g, sample), MatrixKind::similarity);
  accumulate_pairs(idx, supports, ones,
                   [&](std::uint32_t i, const std::vector<std::uint32_t>& touched, const std::vector<double>& acc) {
                     for (auto j : touched) {
                       // acc holds the exact intersection count.
                       m.set_symmetric(i, j,
                                       acc[j] / std::sqrt(static_cast<double>(supports[i].size()) *
                                                          static_cast<double>(supports[j].size())));
                     }
                   });
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace lmap
