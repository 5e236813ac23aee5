#include "lmap/sampling.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "text.hpp"

namespace lmap {

std::uint64_t SampleRng::below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("empty range for random draw");
  // Lemire, "Fast random integer generation in an interval" (2019).
  auto x = engine_();
  auto m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SampleRng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SampleRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * unit() - 1.0;
    v = 2.0 * unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stage + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<NodeId> draw_without_replacement(std::span<const NodeId> candidates, std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> pool(candidates.begin(), candidates.end());
  n = std::min(n, pool.size());
  SampleRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

Sample sample_by_keyword(const CitationGraph& g, std::string_view keyword, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("sample size must be at least 1");
  const auto kw = detail::trim(keyword);
  std::vector<NodeId> matches;
  if (auto k = g.keyword_index(kw)) {
    for (NodeId v = 0; v < g.size(); ++v) {
      auto tags = g.keywords(v);
      if (std::binary_search(tags.begin(), tags.end(), *k)) matches.push_back(v);
    }
  }
  if (matches.empty()) throw DataError("no paper carries keyword '" + std::string(kw) + "'");
  Sample s;
  s.selector = SelectorKind::keyword;
  s.keyword = std::string(kw);
  s.seed = seed;
  s.parent_size = g.size();
  s.truncated = matches.size() < n;
  s.nodes = draw_without_replacement(matches, n, seed);
  return s;
}

Sample sample_random(const CitationGraph& g, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("sample size must be at least 1");
  if (n > g.size()) {
    throw UsageError("sample size " + std::to_string(n) + " exceeds node count " + std::to_string(g.size()));
  }
  std::vector<NodeId> all(g.size());
  for (NodeId v = 0; v < g.size(); ++v) all[v] = v;
  Sample s;
  s.selector = SelectorKind::random;
  s.seed = seed;
  s.parent_size = g.size();
  s.nodes = draw_without_replacement(all, n, seed);
  return s;
}

void write_sample(const Sample& sample, const CitationGraph& g, std::ostream& out, std::string_view corpus_hash,
                  std::string_view extra) {
  out << "# id\tselector=" << (sample.selector == SelectorKind::keyword ? "keyword:" + sample.keyword : "random")
      << "\tseed=" << sample.seed << "\tparent=" << sample.parent_size << "\tcorpus=" << corpus_hash;
  if (!extra.empty()) out << '\t' << extra;
  out << '\n';
  for (NodeId v : sample.nodes) out << g.id(v) << '\n';
}

Sample read_sample(std::istream& in, const CitationGraph& g) {
  Sample s;
  s.parent_size = g.size();
  std::string line;
  std::unordered_set<NodeId> seen;
  while (std::getline(in, line)) {
    auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      for (auto part : detail::split(body.substr(1), '\t')) {
        auto field = std::string(detail::trim(part));
        if (field.starts_with("selector=keyword:")) {
          s.selector = SelectorKind::keyword;
          s.keyword = field.substr(17);
        } else if (field.starts_with("seed=")) {
          s.seed = std::stoull(field.substr(5));
        }
      }
      continue;
    }
    auto v = g.index(body);
    if (!seen.insert(v).second) throw DataError("duplicate id '" + std::string(body) + "' in sample file");
    s.nodes.push_back(v);
  }
  return s;
}

}  // namespace lmap
