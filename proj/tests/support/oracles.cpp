#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>

namespace oracle {

PaperRecord paper(std::string id, std::vector<std::string> refs, std::vector<std::string> keywords,
                  std::optional<int> year) {
  PaperRecord r;
  r.id = std::move(id);
  r.references = std::move(refs);
  r.keywords = std::move(keywords);
  r.year = year;
  return r;
}

CitationGraph graph_of(const std::vector<PaperRecord>& records) {
  auto built = lmap::build_graph(records);
  if (built.dropped_references != 0) throw std::logic_error("fixture has dangling references");
  return std::move(built.graph);
}

CitationGraph random_dag(std::size_t n, double mean_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PaperRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = paper("v" + std::to_string(i));
    if (i > 0) {
      std::uniform_int_distribution<int> degree(0, static_cast<int>(std::lround(2 * mean_degree)));
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::set<std::size_t> targets;
      int d = degree(rng);
      for (int e = 0; e < d && targets.size() < i; ++e) targets.insert(pick(rng));
      for (auto t : targets) r.references.push_back("v" + std::to_string(t));
    }
    records.push_back(std::move(r));
  }
  return graph_of(records);
}

CitationGraph layered_dag(std::size_t layers, std::size_t width, std::uint64_t seed, bool with_sink) {
  std::mt19937_64 rng(seed);
  auto name = [](std::size_t layer, std::size_t k) { return "L" + std::to_string(layer) + "_" + std::to_string(k); };
  std::vector<PaperRecord> records;
  for (std::size_t layer = 0; layer < layers; ++layer) {
    std::size_t count = layer == 0 ? 1 : width;
    for (std::size_t k = 0; k < count; ++k) {
      auto r = paper(name(layer, k));
      if (layer + 1 < layers) {
        std::uniform_int_distribution<std::size_t> pick(0, width - 1);
        std::set<std::size_t> targets{layer == 0 ? 0 : pick(rng)};
        std::uniform_int_distribution<int> extra(0, 3);
        for (int e = extra(rng); e > 0; --e) targets.insert(pick(rng));
        for (auto t : targets) r.references.push_back(name(layer + 1, t));
      }
      if (with_sink && layer == 1 && k == 0) r.references.push_back("sink");
      records.push_back(std::move(r));
    }
  }
  if (with_sink) records.push_back(paper("sink"));
  return graph_of(records);
}

std::set<NodeId> reach_recursive(const CitationGraph& g, NodeId a, unsigned k, bool backward) {
  auto next = [&](NodeId v) { return backward ? g.citations(v) : g.references(v); };
  std::set<NodeId> out;
  if (k == 0) return out;
  for (NodeId b : next(a)) {
    out.insert(b);
    auto deeper = reach_recursive(g, b, k - 1, backward);
    out.insert(deeper.begin(), deeper.end());
  }
  return out;
}

std::set<NodeId> reach_bfs(const CitationGraph& g, NodeId a) {
  std::set<NodeId> seen;
  std::queue<NodeId> q;
  q.push(a);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (NodeId w : g.references(v)) {
      if (seen.insert(w).second) q.push(w);
    }
  }
  return seen;
}

std::map<NodeId, double> path_weights(const CitationGraph& g, NodeId a, unsigned t, double decay, bool final_only) {
  std::map<NodeId, double> w;
  std::function<void(NodeId, unsigned, double)> walk = [&](NodeId v, unsigned depth, double mass) {
    auto refs = g.references(v);
    if (depth == t || refs.empty()) return;
    double share = mass / static_cast<double>(refs.size());
    for (NodeId b : refs) {
      unsigned s = depth + 1;
      if (!final_only || s == t) w[b] += std::pow(decay, s) * share;
      walk(b, s, share);
    }
  };
  walk(a, 0, 1.0);
  return w;
}

std::vector<double> path_level_sums(const CitationGraph& g, NodeId a, unsigned t) {
  std::vector<double> sums(t + 1, 0.0);
  sums[0] = 1.0;
  std::function<void(NodeId, unsigned, double)> walk = [&](NodeId v, unsigned depth, double mass) {
    auto refs = g.references(v);
    if (depth == t) return;
    if (refs.empty()) return;
    double share = mass / static_cast<double>(refs.size());
    for (NodeId b : refs) {
      sums[depth + 1] += share;
      walk(b, depth + 1, share);
    }
  };
  walk(a, 0, 1.0);
  return sums;
}

double cosine(const std::map<NodeId, double>& a, const std::map<NodeId, double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (auto& [k, v] : b) nb += v * v;
  if (na == 0 || nb == 0) return 0.0;
  return dot / std::sqrt(na * nb);
}

double set_cosine(const std::set<NodeId>& a, const std::set<NodeId>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t common = 0;
  for (auto x : a) common += b.count(x);
  return static_cast<double>(common) / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double set_jaccard(const std::set<NodeId>& a, const std::set<NodeId>& b) {
  std::set<NodeId> u = a;
  u.insert(b.begin(), b.end());
  if (u.empty()) return 0.0;
  std::size_t common = 0;
  for (auto x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(u.size());
}

bool dfs_acyclic(const CitationGraph& g) {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> state(g.size(), 0);
  for (NodeId root = 0; root < g.size(); ++root) {
    if (state[root]) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      auto refs = g.references(v);
      if (i < refs.size()) {
        NodeId w = refs[i++];
        if (state[w] == 1) return false;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

double naive_kl(const std::vector<double>& joint, const std::vector<lmap::Point2>& y) {
  const std::size_t n = y.size();
  double z = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
        z += 1.0 / (1.0 + dx * dx + dy * dy);
      }
  double kl = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double p = joint[i * n + j];
      if (i == j || p <= 0) continue;
      double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
      double q = 1.0 / (1.0 + dx * dx + dy * dy) / z;
      kl += p * std::log(p / q);
    }
  return kl;
}

std::vector<lmap::Point2> numeric_gradient(const std::vector<double>& joint, std::vector<lmap::Point2> points,
                                           double step) {
  std::vector<lmap::Point2> grad(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int d = 0; d < 2; ++d) {
      double keep = points[i][d];
      points[i][d] = keep + step;
      double up = naive_kl(joint, points);
      points[i][d] = keep - step;
      double down = naive_kl(joint, points);
      points[i][d] = keep;
      grad[i][d] = (up - down) / (2 * step);
    }
  }
  return grad;
}

}  // namespace oracle
