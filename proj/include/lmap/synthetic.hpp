#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lmap/graph.hpp"

namespace lmap {

/// Preferential-attachment citation corpus with topical communities.
///
/// Papers arrive in id order; each cites earlier papers, picking within its
/// own topic with probability `topic_affinity`, and choosing a target with
/// probability proportional to (citations received + 1).
struct SyntheticOptions {
  std::size_t papers = 500;
  double mean_references = 5.0;
  std::size_t topics = 5;
  double topic_affinity = 0.85;
  std::size_t founders = 5;  ///< leading papers with no references
  std::uint64_t seed = 1;
  int first_year = 1990;
  int last_year = 2020;
  std::string shared_keyword = "Payment";  ///< carried by every paper when non-empty
  std::size_t terms_per_topic = 6;
};

std::vector<PaperRecord> preferential_attachment_corpus(const SyntheticOptions& options);

/// One JSON object per line in the layout read by parse_json_lines.
void write_json_lines(std::span<const PaperRecord> records, std::ostream& out);

}  // namespace lmap
