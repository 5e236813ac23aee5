#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lmap/graph.hpp"

namespace lmap {

/// Portable seeded generator: std::mt19937_64 (fully specified by the
/// standard) with Lemire's multiply-and-reject bounded draw, so every
/// platform reproduces the same samples.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  /// Standard normal variate (Box-Muller, polar form).
  double normal();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent seed for a pipeline stage.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage);

enum class SelectorKind { keyword, random };

struct Sample {
  std::vector<NodeId> nodes;  ///< draw order
  SelectorKind selector = SelectorKind::random;
  std::string keyword;
  std::uint64_t seed = 0;
  std::size_t parent_size = 0;
  /// Set when fewer papers matched the keyword than requested.
  bool truncated = false;
};

/// Uniform seeded draw without replacement: the first n positions of a
/// Fisher-Yates shuffle of `candidates`.
std::vector<NodeId> draw_without_replacement(std::span<const NodeId> candidates, std::size_t n, std::uint64_t seed);

/// Papers whose keyword list contains `keyword` exactly (after trimming).
/// Throws DataError when nothing matches; returns every match when fewer
/// than n exist.
Sample sample_by_keyword(const CitationGraph& g, std::string_view keyword, std::size_t n, std::uint64_t seed);

/// Throws UsageError when n exceeds the node count.
Sample sample_random(const CitationGraph& g, std::size_t n, std::uint64_t seed);

/// One id per line after a single '#' header that records selector, seed,
/// parent size and `corpus_hash`, followed by `extra` when given.
void write_sample(const Sample& sample, const CitationGraph& g, std::ostream& out, std::string_view corpus_hash,
                  std::string_view extra = {});
Sample read_sample(std::istream& in, const CitationGraph& g);

}  // namespace lmap
