#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lmap/errors.hpp"
#include "lmap/mapping.hpp"
#include "support/oracles.hpp"

using namespace lmap;

namespace {

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  return ids;
}

PairwiseMatrix euclidean(const std::vector<Point2>& pts) {
  PairwiseMatrix d(names(pts.size()), MatrixKind::distance);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      d(i, j) = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
  return d;
}

// Two groups: small distances inside a group, large ones across.
PairwiseMatrix two_groups(std::size_t per_group, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> near(0.5, 1.5), far(90.0, 110.0);
  const auto n = 2 * per_group;
  PairwiseMatrix d(names(n), MatrixKind::distance);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set_symmetric(i, j, (i < per_group) == (j < per_group) ? near(rng) : far(rng));
  return d;
}

std::vector<Point2> blobs(std::size_t per_blob, double spread, Point2 a, Point2 b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, spread);
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < per_blob; ++i) pts.push_back({a[0] + z(rng), a[1] + z(rng)});
  for (std::size_t i = 0; i < per_blob; ++i) pts.push_back({b[0] + z(rng), b[1] + z(rng)});
  return pts;
}

double row_perplexity(const ConditionalProbabilities& c, std::size_t i) {
  double h = 0;
  for (std::size_t j = 0; j < c.n; ++j) {
    double p = c.p[i * c.n + j];
    if (p > 0) h -= p * std::log(p);
  }
  return std::exp(h);
}

}  // namespace

TEST_CASE("similarity to distance") {
  CHECK(invert_similarity(1.0) == 0.0);
  CHECK(std::abs(invert_similarity(0.0) - (1e5 - 1.0 / (1.0 + 1e-5))) < 1e-9);
  CHECK(std::abs(invert_similarity(0.0) - 99999.00001) < 1e-4);
  CHECK(std::abs(invert_similarity(0.5) - 0.99997) < 1e-5);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    CHECK((invert_similarity(std::min(a, b)) > invert_similarity(std::max(a, b))));
    CHECK(invert_similarity(a) >= 0.0);
  }

  PairwiseMatrix s(names(3), MatrixKind::similarity);
  for (std::size_t i = 0; i < 3; ++i) s(i, i) = 1.0;
  s.set_symmetric(0, 1, 0.5);
  s.set_symmetric(0, 2, 1.0 + 1e-12);
  auto d = similarity_to_distance(s);
  CHECK(d.kind() == MatrixKind::distance);
  CHECK(d(0, 0) == 0.0);
  CHECK(d(0, 2) == 0.0);
  CHECK(d(0, 1) == d(1, 0));
  CHECK(d(1, 2) == invert_similarity(0.0));
  s.set_symmetric(1, 2, 1.5);
  CHECK_THROWS_AS(similarity_to_distance(s), DataError);
}

TEST_CASE("conditional probabilities: symmetry and duplicates") {
  PairwiseMatrix eq(names(3), MatrixKind::distance);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) eq(i, j) = i == j ? 0.0 : 2.0;
  auto c = conditional_probabilities(eq, 2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(c.p[i * 3 + j] == doctest::Approx(i == j ? 0.0 : 0.5));
  CHECK(c.unconverged == 0);
  auto tight = conditional_probabilities(eq, 1.5);
  CHECK(tight.unconverged == 3);
  CHECK(tight.p[1] == doctest::Approx(0.5));

  std::vector<Point2> pts{{0, 0}, {0, 0}, {1, 0}, {0, 2}, {3, 3}, {-1, 4}};
  auto dup = conditional_probabilities(euclidean(pts), 2.5);
  for (std::size_t j = 2; j < pts.size(); ++j) CHECK(dup.p[0 * 6 + 1] > dup.p[0 * 6 + j]);
  for (std::size_t j = 2; j < pts.size(); ++j) CHECK(dup.p[1 * 6 + 0] > dup.p[1 * 6 + j]);

  CHECK_THROWS_AS(conditional_probabilities(eq, 1.0), UsageError);
  CHECK_THROWS_AS(conditional_probabilities(eq, 3.0), UsageError);
  eq(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(conditional_probabilities(eq, 2.0), DataError);
}

TEST_CASE("conditional rows sum to one and reach the target perplexity") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point2> pts(60);
    for (auto& p : pts) p = {u(rng), u(rng)};
    for (double perp : {5.0, 20.0, 45.0}) {
      auto c = conditional_probabilities(euclidean(pts), perp);
      CHECK(c.unconverged == 0);
      for (std::size_t i = 0; i < c.n; ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < c.n; ++j) sum += c.p[i * c.n + j];
        CHECK(std::abs(sum - 1.0) < 1e-10);
        CHECK(std::abs(row_perplexity(c, i) - perp) < 1e-4);
      }
      auto joint = joint_probabilities(c);
      double total = 0;
      for (std::size_t i = 0; i < c.n; ++i)
        for (std::size_t j = 0; j < c.n; ++j) {
          total += joint[i * c.n + j];
          CHECK(joint[i * c.n + j] == joint[j * c.n + i]);
        }
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("objective gradient agrees with central differences") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> hidden(10), y(10);
    for (auto& p : hidden) p = {u(rng), u(rng)};
    for (auto& p : y) p = {u(rng), u(rng)};
    auto joint = joint_probabilities(conditional_probabilities(euclidean(hidden), 4.0));
    std::vector<Point2> grad(10);
    double kl = kl_divergence(joint, y, grad);
    CHECK(std::abs(kl - oracle::naive_kl(joint, y)) < 1e-12);
    auto numeric = oracle::numeric_gradient(joint, y, 1e-5);
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < 10; ++i)
      for (int d = 0; d < 2; ++d) {
        diff += std::pow(grad[i][d] - numeric[i][d], 2);
        norm += std::pow(numeric[i][d], 2);
      }
    CHECK(std::sqrt(diff / norm) < 1e-4);
  }
}

TEST_CASE("embedding separates two groups and is deterministic") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    TsneOptions options;
    options.seed = seed;
    options.iterations = 600;
    auto d = two_groups(50, seed);
    auto e = tsne_embed(d, options);
    REQUIRE(e.points.size() == 100);
    Point2 ca{0, 0}, cb{0, 0};
    for (std::size_t i = 0; i < 50; ++i) {
      ca[0] += e.points[i][0] / 50;
      ca[1] += e.points[i][1] / 50;
      cb[0] += e.points[i + 50][0] / 50;
      cb[1] += e.points[i + 50][1] / 50;
    }
    double spread = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      auto& c = i < 50 ? ca : cb;
      spread += std::hypot(e.points[i][0] - c[0], e.points[i][1] - c[1]) / 100;
    }
    CHECK(std::hypot(ca[0] - cb[0], ca[1] - cb[1]) > 5 * spread);
    CHECK(e.kl_divergence >= 0.0);
    CHECK(e.ids == d.ids());

    auto again = tsne_embed(d, options);
    CHECK(again.points == e.points);
    CHECK(again.kl_divergence == e.kl_divergence);
  }
}

TEST_CASE("automatic bandwidth") {
  std::vector<Point2> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK(auto_bandwidth(square, 1) == 1.0);
  CHECK(auto_bandwidth(square, 2, BandwidthReading::kth_neighbor) == 1.0);
  CHECK(auto_bandwidth(square, 3, BandwidthReading::kth_neighbor) == doctest::Approx(std::sqrt(2.0)));
  CHECK(auto_bandwidth(square, 3) == doctest::Approx((2 + std::sqrt(2.0)) / 3));
  CHECK_THROWS_AS(auto_bandwidth(square, 4), UsageError);
  CHECK_THROWS_AS(auto_bandwidth(square, 0), UsageError);
  std::vector<Point2> same(5, Point2{2, 2});
  CHECK_THROWS_AS(auto_bandwidth(same, 2), DataError);
}

TEST_CASE("mean shift") {
  std::vector<Point2> one{{3, -1}};
  auto single = mean_shift(one, 1.0);
  CHECK(single.cluster_count() == 1);
  CHECK(single.labels == std::vector<int>{0});
  CHECK(single.modes[0] == Point2{3, -1});

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double sigma = 1.0;
    auto pts = blobs(30, 0.1, {0, 0}, {20, 0}, seed);
    auto l = mean_shift(pts, sigma);
    REQUIRE(l.cluster_count() == 2);
    for (std::size_t i = 1; i < 30; ++i) CHECK(l.labels[i] == l.labels[0]);
    for (std::size_t i = 31; i < 60; ++i) CHECK(l.labels[i] == l.labels[30]);
    CHECK(l.labels[0] != l.labels[30]);
    CHECK(l.cluster_sizes() == std::vector<std::size_t>{30, 30});
    CHECK(l.bandwidth == sigma);

    for (std::size_t start : {0u, 17u, 45u}) {
      auto trace = mean_shift_trace(pts, sigma, start);
      REQUIRE_FALSE(trace.empty());
      for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-15);
      CHECK(trace.back() < 1e-4 * sigma);
    }
  }
  CHECK_THROWS_AS(mean_shift(one, 0.0), UsageError);
}

TEST_CASE("labels are ordered by cluster size") {
  auto pts = blobs(10, 0.05, {0, 0}, {50, 50}, 3);
  pts.push_back({50.01, 50.0});
  auto l = mean_shift(pts, 1.0);
  REQUIRE(l.cluster_count() == 2);
  CHECK(l.labels.back() == 0);
  CHECK(l.labels.front() == 1);
}

TEST_CASE("embedding and label files round trip") {
  Embedding e;
  e.ids = {"a", "b b", "c"};
  e.points = {{0.1, -2.5e-7}, {1.0 / 3, 12345.678901234567}, {-0.0, 7}};
  std::stringstream io;
  write_embedding(e, io, "kl=0.5");
  CHECK(io.str().rfind("# id\tx\ty\tkl=0.5\n", 0) == 0);
  auto back = read_embedding(io);
  CHECK(back.ids == e.ids);
  CHECK(back.points == e.points);

  ClusterLabeling l;
  l.labels = {1, 0, 0};
  l.modes = {{0, 0}, {1, 1}};
  std::stringstream lab;
  write_labels(e.ids, l, lab, "sigma=2.5");
  std::vector<std::string> ids;
  auto lb = read_labels(lab, &ids);
  CHECK(ids == e.ids);
  CHECK(lb.labels == l.labels);
  CHECK(lb.cluster_count() == 2);
  CHECK(lb.bandwidth == 2.5);
}
