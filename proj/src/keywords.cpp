#include "lmap/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace lmap {

namespace {

bool has_keyword(const CitationGraph& g, NodeId v, std::uint32_t k) {
  auto tags = g.keywords(v);
  return std::binary_search(tags.begin(), tags.end(), k);
}

void check_labels(std::span<const NodeId> sample, std::span<const int> labels, std::size_t cluster_count) {
  if (labels.size() != sample.size()) throw UsageError("label count does not match sample size");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= cluster_count) throw UsageError("cluster label out of range");
  }
}

}  // namespace

double keyword_frequency(const CitationGraph& g, std::span<const NodeId> docs, std::string_view keyword) {
  if (docs.empty()) throw UsageError("keyword frequency over an empty document set");
  auto k = g.keyword_index(keyword);
  if (!k) return 0.0;
  std::size_t hits = 0;
  for (NodeId v : docs) hits += has_keyword(g, v, *k) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(docs.size());
}

std::vector<KeywordStats> rank_by_ratio(const CitationGraph& g, std::span<const NodeId> sample, std::size_t min_occ,
                                        std::string_view exclude) {
  if (sample.empty()) return {};
  const auto vocab = g.keyword_vocabulary().size();
  std::vector<std::size_t> global(vocab, 0), local(vocab, 0);
  for (NodeId v = 0; v < g.size(); ++v) {
    for (auto k : g.keywords(v)) ++global[k];
  }
  for (NodeId v : sample) {
    for (auto k : g.keywords(v)) ++local[k];
  }
  const auto n_global = g.size();
  const auto n_local = sample.size();
  std::vector<KeywordStats> out;
  for (std::uint32_t k = 0; k < vocab; ++k) {
    if (local[k] == 0 || local[k] < min_occ) continue;
    const auto& name = g.keyword_vocabulary()[k];
    if (name == exclude) continue;
    KeywordStats s;
    s.keyword = name;
    s.count_local = local[k];
    s.count_global = global[k];
    s.r_local = static_cast<double>(local[k]) / static_cast<double>(n_local);
    s.r_global = static_cast<double>(global[k]) / static_cast<double>(n_global);
    // Integer cross-multiplication keeps the ratio exact whenever representable.
    s.ratio = static_cast<double>(local[k] * n_global) / static_cast<double>(n_local * global[k]);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const KeywordStats& a, const KeywordStats& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    if (a.count_local != b.count_local) return a.count_local > b.count_local;
    return a.keyword < b.keyword;
  });
  return out;
}

std::vector<std::map<std::uint32_t, double>> cluster_term_frequencies(const CitationGraph& g,
                                                                      std::span<const NodeId> sample,
                                                                      std::span<const int> labels,
                                                                      std::size_t cluster_count) {
  check_labels(sample, labels, cluster_count);
  std::vector<std::map<std::uint32_t, double>> tf(cluster_count);
  std::vector<double> totals(cluster_count, 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    for (auto k : g.keywords(sample[i])) {
      tf[c][k] += 1.0;
      totals[c] += 1.0;
    }
  }
  for (std::size_t c = 0; c < cluster_count; ++c) {
    for (auto& [k, v] : tf[c]) v /= totals[c];
  }
  return tf;
}

ClusterKeywordTable cluster_tfidf(const CitationGraph& g, std::span<const NodeId> sample, std::span<const int> labels,
                                  std::size_t cluster_count, std::size_t min_occ, std::string_view exclude) {
  check_labels(sample, labels, cluster_count);
  ClusterKeywordTable table;
  table.clusters.resize(cluster_count);

  std::vector<std::size_t> docs(cluster_count, 0);
  for (int l : labels) ++docs[static_cast<std::size_t>(l)];
  std::size_t populated = 0;
  for (std::size_t c = 0; c < cluster_count; ++c) {
    if (docs[c] == 0) {
      table.empty_clusters.push_back(static_cast<int>(c));
    } else {
      ++populated;
    }
  }

  const auto tf = cluster_term_frequencies(g, sample, labels, cluster_count);
  std::map<std::uint32_t, std::size_t> sample_count;
  std::vector<std::map<std::uint32_t, std::size_t>> counts(cluster_count);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (auto k : g.keywords(sample[i])) {
      ++sample_count[k];
      ++counts[static_cast<std::size_t>(labels[i])][k];
    }
  }

  for (const auto& [k, total] : sample_count) {
    const auto& name = g.keyword_vocabulary()[k];
    if (total < min_occ || name == exclude) continue;
    std::size_t df = 0;
    for (std::size_t c = 0; c < cluster_count; ++c) df += tf[c].contains(k) ? 1 : 0;
    const double idf = std::log(static_cast<double>(populated) / static_cast<double>(df));
    int best = -1;
    double best_score = 0.0;
    for (std::size_t c = 0; c < cluster_count; ++c) {
      auto it = tf[c].find(k);
      if (it == tf[c].end()) continue;
      const double score = it->second * idf;
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) continue;
    table.assignment[name] = best;
    table.clusters[static_cast<std::size_t>(best)].push_back(
        {name, best_score, counts[static_cast<std::size_t>(best)].at(k)});
  }
  for (auto& list : table.clusters) {
    std::sort(list.begin(), list.end(), [](const ScoredKeyword& a, const ScoredKeyword& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.keyword < b.keyword;
    });
  }
  return table;
}

std::vector<std::size_t> keyword_overlay(const CitationGraph& g, std::span<const NodeId> sample,
                                         std::string_view keyword) {
  std::vector<std::size_t> hits;
  if (auto k = g.keyword_index(keyword)) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (has_keyword(g, sample[i], *k)) hits.push_back(i);
    }
  }
  if (hits.empty()) throw DataError("keyword '" + std::string(keyword) + "' does not occur in the sample");
  return hits;
}

std::vector<double> cluster_occupancy(const CitationGraph& g, std::span<const NodeId> sample,
                                      std::span<const int> labels, std::size_t cluster_count,
                                      std::string_view keyword) {
  check_labels(sample, labels, cluster_count);
  std::vector<double> occupancy(cluster_count, 0.0);
  for (auto i : keyword_overlay(g, sample, keyword)) occupancy[static_cast<std::size_t>(labels[i])] += 1.0;
  return occupancy;
}

double colocation_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) dot += a[i] * b[i];
  for (double v : a) na += v * v;
  for (double v : b) nb += v * v;
  if (!(na > 0.0 && nb > 0.0)) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

std::vector<std::string> colocation_order(const CitationGraph& g, std::span<const NodeId> sample,
                                          std::span<const int> labels, std::size_t cluster_count,
                                          std::span<const std::string> keywords) {
  const auto m = keywords.size();
  std::vector<std::vector<double>> occ(m);
  std::vector<double> freq(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    occ[i] = cluster_occupancy(g, sample, labels, cluster_count, keywords[i]);
    for (double v : occ[i]) freq[i] += v;
  }
  // Preference among candidates: higher value, then higher frequency, then name.
  auto better = [&](std::size_t a, double va, std::size_t b, double vb) {
    if (va != vb) return va > vb;
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return keywords[a] < keywords[b];
  };
  std::vector<char> used(m, 0);
  std::vector<std::string> order;
  std::size_t current = m;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pick = m;
    double pick_value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double value = current == m ? 0.0 : colocation_similarity(occ[current], occ[i]);
      if (pick == m || better(i, value, pick, pick_value)) {
        pick = i;
        pick_value = value;
      }
    }
    used[pick] = 1;
    order.push_back(keywords[pick]);
    current = pick;
  }
  return order;
}

void write_ratio_report(const std::vector<KeywordStats>& stats, std::ostream& out, std::string_view header) {
  out << "# keyword\tcount_local\tratio";
  if (!header.empty()) out << '\t' << header;
  out << '\n';
  for (const auto& s : stats) out << fmt::format("{}\t{}\t{:.12g}\n", s.keyword, s.count_local, s.ratio);
}

void write_cluster_table(const ClusterKeywordTable& table, std::ostream& out, std::string_view header) {
  out << "# cluster\trank\tkeyword\ttfidf\tcount";
  if (!header.empty()) out << '\t' << header;
  out << '\n';
  for (std::size_t c = 0; c < table.clusters.size(); ++c) {
    for (std::size_t r = 0; r < table.clusters[c].size(); ++r) {
      const auto& kw = table.clusters[c][r];
      out << fmt::format("{}\t{}\t{}\t{:.12g}\t{}\n", c, r + 1, kw.keyword, kw.score, kw.count);
    }
  }
}

}  // namespace lmap
