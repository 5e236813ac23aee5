#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lmap/errors.hpp"
#include "lmap/keywords.hpp"
#include "support/oracles.hpp"

using namespace lmap;
using oracle::paper;

namespace {

std::vector<NodeId> all_nodes(const CitationGraph& g) {
  std::vector<NodeId> v(g.size());
  std::iota(v.begin(), v.end(), NodeId{0});
  return v;
}

// 100 papers; the first 10 form the sample. "Rare" tags paper 0 only,
// "Half" tags 5 sampled and 45 other papers.
CitationGraph ratio_corpus() {
  std::vector<PaperRecord> records;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> kws{"Payment"};
    if (i == 0) kws.push_back("Rare");
    if ((i < 10 && i % 2 == 0) || (i >= 10 && i < 55)) kws.push_back("Half");
    records.push_back(paper("p" + std::to_string(i), {}, kws));
  }
  return oracle::graph_of(records);
}

// Three clusters with hand-built keyword lists:
//   cluster 0: {A,B} {A,C}        cluster 1: {B,C} {B} {D}      cluster 2: {A,B,D,E}
CitationGraph tfidf_corpus() {
  return oracle::graph_of({
      paper("d1", {}, {"A", "B"}),
      paper("d2", {}, {"A", "C"}),
      paper("d3", {}, {"B", "C"}),
      paper("d4", {}, {"B"}),
      paper("d5", {}, {"D"}),
      paper("d6", {}, {"A", "B", "D", "E"}),
  });
}

const std::vector<int> kTfidfLabels{0, 0, 1, 1, 1, 2};

}  // namespace

TEST_CASE("keyword frequency") {
  auto g = ratio_corpus();
  auto docs = all_nodes(g);
  CHECK(keyword_frequency(g, docs, "Payment") == 1.0);
  CHECK(keyword_frequency(g, docs, "Nothing") == 0.0);
  CHECK(keyword_frequency(g, std::span(docs).first(10), "Half") == 0.5);
  CHECK(keyword_frequency(g, docs, "Half") == 0.5);
  CHECK(keyword_frequency(g, docs, "Rare") == 0.01);
  CHECK_THROWS_AS(keyword_frequency(g, std::span<const NodeId>{}, "Rare"), UsageError);
}

TEST_CASE("frequency ratio") {
  auto g = ratio_corpus();
  auto nodes = all_nodes(g);
  auto sample = std::span<const NodeId>(nodes).first(10);
  auto ranked = rank_by_ratio(g, sample, 1, "Payment");
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].keyword == "Rare");
  CHECK(ranked[0].ratio == 10.0);
  CHECK(ranked[0].r_local == 0.1);
  CHECK(ranked[0].r_global == 0.01);
  CHECK(ranked[1].keyword == "Half");
  CHECK(ranked[1].ratio == 1.0);
  CHECK(ranked[1].count_local == 5);
  CHECK(ranked[1].count_global == 50);

  CHECK(rank_by_ratio(g, sample, 2, "Payment").size() == 1);
  auto with_sampling_kw = rank_by_ratio(g, sample, 1);
  CHECK(with_sampling_kw.size() == 3);

  std::ostringstream out;
  write_ratio_report(ranked, out, "lmap=x");
  CHECK(out.str() == "# keyword\tcount_local\tratio\tlmap=x\nRare\t1\t10\nHalf\t5\t1\n");
}

TEST_CASE("ratio ties and scale freedom") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> pick(0, 7);
  std::vector<PaperRecord> records, doubled;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> kws;
    for (int k = 0; k < 3; ++k) kws.push_back("k" + std::to_string(pick(rng)));
    std::sort(kws.begin(), kws.end());
    kws.erase(std::unique(kws.begin(), kws.end()), kws.end());
    records.push_back(paper("p" + std::to_string(i), {}, kws));
    doubled.push_back(paper("p" + std::to_string(i), {}, kws));
    doubled.push_back(paper("q" + std::to_string(i), {}, kws));
  }
  auto g = oracle::graph_of(records);
  auto g2 = oracle::graph_of(doubled);
  std::vector<NodeId> sample, sample2;
  for (NodeId v = 0; v < 200; v += 3) {
    sample.push_back(v);
    sample2.push_back(2 * v);
    sample2.push_back(2 * v + 1);
  }
  auto a = rank_by_ratio(g, sample, 1);
  auto b = rank_by_ratio(g2, sample2, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].keyword == b[i].keyword);
    CHECK(a[i].ratio == b[i].ratio);
    if (i > 0) {
      bool ordered = a[i - 1].ratio > a[i].ratio ||
                     (a[i - 1].ratio == a[i].ratio && (a[i - 1].count_local > a[i].count_local ||
                                                       (a[i - 1].count_local == a[i].count_local &&
                                                        a[i - 1].keyword < a[i].keyword)));
      CHECK(ordered);
    }
  }
  std::set<std::string> previous;
  for (auto& s : a) previous.insert(s.keyword);
  for (std::size_t m = 2; m < 40; m += 3) {
    std::set<std::string> now;
    for (auto& s : rank_by_ratio(g, sample, m)) now.insert(s.keyword);
    CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
  }
}

TEST_CASE("cluster TF-IDF against the hand computation") {
  auto g = tfidf_corpus();
  auto sample = all_nodes(g);
  auto table = cluster_tfidf(g, sample, kTfidfLabels, 3, 1);
  const double l15 = std::log(1.5), l3 = std::log(3.0);

  REQUIRE(table.clusters[0].size() == 2);
  CHECK(table.clusters[0][0].keyword == "A");
  CHECK(std::abs(table.clusters[0][0].score - 0.5 * l15) < 1e-10);
  CHECK(table.clusters[0][0].count == 2);
  CHECK(table.clusters[0][1].keyword == "C");
  CHECK(std::abs(table.clusters[0][1].score - 0.25 * l15) < 1e-10);
  REQUIRE(table.clusters[1].size() == 1);
  CHECK(table.clusters[1][0].keyword == "D");
  CHECK(std::abs(table.clusters[1][0].score - 0.25 * l15) < 1e-10);
  REQUIRE(table.clusters[2].size() == 1);
  CHECK(table.clusters[2][0].keyword == "E");
  CHECK(std::abs(table.clusters[2][0].score - 0.25 * l3) < 1e-10);

  CHECK(table.assignment == std::map<std::string, int>{{"A", 0}, {"C", 0}, {"D", 1}, {"E", 2}});
  CHECK(table.assignment.count("B") == 0);
  CHECK(table.empty_clusters.empty());

  auto filtered = cluster_tfidf(g, sample, kTfidfLabels, 3, 2);
  CHECK(filtered.assignment.count("E") == 0);
  CHECK(filtered.assignment.size() == 3);
  auto excluded = cluster_tfidf(g, sample, kTfidfLabels, 3, 1, "A");
  CHECK(excluded.assignment == std::map<std::string, int>{{"C", 0}, {"D", 1}, {"E", 2}});

  std::ostringstream out;
  write_cluster_table(table, out);
  CHECK(out.str().rfind("# cluster\trank\tkeyword\ttfidf\tcount\n0\t1\tA\t", 0) == 0);
}

TEST_CASE("keyword confined to one of four clusters") {
  auto g = oracle::graph_of({
      paper("a", {}, {"X", "Y"}),
      paper("b", {}, {"Y"}),
      paper("c", {}, {"Y"}),
      paper("d", {}, {"Y", "Z"}),
  });
  auto sample = all_nodes(g);
  std::vector<int> labels{0, 1, 2, 3};
  auto table = cluster_tfidf(g, sample, labels, 4, 1);
  REQUIRE(table.clusters[0].size() == 1);
  CHECK(table.clusters[0][0].keyword == "X");
  CHECK(std::abs(table.clusters[0][0].score - 0.5 * std::log(4.0)) < 1e-12);
  CHECK(table.assignment.count("Y") == 0);

  std::vector<int> with_gap{0, 0, 2, 2};
  auto gap = cluster_tfidf(g, sample, with_gap, 4, 1);
  CHECK(gap.empty_clusters == std::vector<int>{1, 3});
}

TEST_CASE("term frequencies and single assignment on random fixtures") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> kw(0, 14), cl(0, 4), len(0, 5);
    std::vector<PaperRecord> records;
    std::vector<int> labels;
    for (int i = 0; i < 80; ++i) {
      std::vector<std::string> kws;
      for (int k = len(rng); k > 0; --k) kws.push_back("w" + std::to_string(kw(rng)));
      std::sort(kws.begin(), kws.end());
      kws.erase(std::unique(kws.begin(), kws.end()), kws.end());
      records.push_back(paper("p" + std::to_string(i), {}, kws));
      labels.push_back(cl(rng));
    }
    auto g = oracle::graph_of(records);
    auto sample = all_nodes(g);
    for (auto& row : cluster_term_frequencies(g, sample, labels, 5)) {
      if (row.empty()) continue;
      double sum = 0;
      for (auto& [k, v] : row) sum += v;
      CHECK(std::abs(sum - 1.0) < 1e-10);
    }
    auto table = cluster_tfidf(g, sample, labels, 5, 3);
    std::set<std::string> seen;
    std::size_t listed = 0;
    for (std::size_t c = 0; c < 5; ++c) {
      for (std::size_t r = 0; r < table.clusters[c].size(); ++r) {
        const auto& s = table.clusters[c][r];
        CHECK(seen.insert(s.keyword).second);
        CHECK(table.assignment.at(s.keyword) == static_cast<int>(c));
        CHECK(s.score > 0.0);
        if (r > 0) CHECK(table.clusters[c][r - 1].score >= s.score);
        ++listed;
      }
    }
    CHECK(listed == table.assignment.size());
  }
}

TEST_CASE("overlay and co-location") {
  auto g = oracle::graph_of({
      paper("a", {}, {"One", "Same1", "Same2", "Left"}),
      paper("b", {}, {"Same1", "Same2", "Left"}),
      paper("c", {}, {"Right", "Mixed"}),
      paper("d", {}, {"Right", "Mixed", "Left"}),
  });
  auto sample = all_nodes(g);
  std::vector<int> labels{0, 0, 1, 1};
  CHECK(keyword_overlay(g, sample, "One") == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(keyword_overlay(g, sample, "Unknown"), DataError);

  auto s1 = cluster_occupancy(g, sample, labels, 2, "Same1");
  auto s2 = cluster_occupancy(g, sample, labels, 2, "Same2");
  auto right = cluster_occupancy(g, sample, labels, 2, "Right");
  CHECK(s1 == std::vector<double>{2, 0});
  CHECK(colocation_similarity(s1, s2) == 1.0);
  CHECK(colocation_similarity(s1, right) == 0.0);

  std::vector<std::string> kws{"Right", "Same1", "Left", "Mixed"};
  auto order = colocation_order(g, sample, labels, 2, kws);
  // Left is the most frequent (3 papers); Same1 {2,0} is closest to Left {2,1};
  // then Right {0,2} and Mixed {0,2} tie on similarity to Same1 and on frequency.
  CHECK(order == std::vector<std::string>{"Left", "Same1", "Mixed", "Right"});
}
