#include "lmap/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "lmap/errors.hpp"
#include "lmap/sampling.hpp"
#include "text.hpp"

namespace lmap {

// ---------------------------------------------------------------------------
// Distance inversion

double invert_similarity(double s, double epsilon) { return 1.0 / (epsilon + s) - 1.0 / (epsilon + 1.0); }

PairwiseMatrix similarity_to_distance(const PairwiseMatrix& similarity, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw UsageError("epsilon must be positive");
  constexpr double kSlack = 1e-9;
  PairwiseMatrix d(similarity.ids(), MatrixKind::distance);
  const auto n = similarity.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = similarity(i, j);
      if (!(s >= -kSlack && s <= 1.0 + kSlack)) {
        throw DataError(fmt::format("similarity {} between '{}' and '{}' is outside [0, 1]", s, similarity.ids()[i],
                                    similarity.ids()[j]));
      }
      d(i, j) = std::max(0.0, invert_similarity(std::clamp(s, 0.0, 1.0), epsilon));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// t-SNE

ConditionalProbabilities conditional_probabilities(const PairwiseMatrix& distances, double perplexity) {
  const auto n = distances.size();
  if (n < 3) throw UsageError("t-SNE needs at least three points");
  if (!(perplexity > 1.0) || perplexity > static_cast<double>(n - 1)) {
    throw UsageError(fmt::format("perplexity {} infeasible for {} points (need 1 < perplexity <= {})", perplexity, n,
                                 n - 1));
  }
  for (double v : distances.values()) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("distance matrix has negative or non-finite entries");
  }

  ConditionalProbabilities out;
  out.n = n;
  out.p.assign(n * n, 0.0);
  out.beta.assign(n, 0.0);
  const double target = std::log(perplexity);
  std::size_t unconverged = 0;
  const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic, 16) reduction(+ : unconverged)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto row = distances.row(i);
    // Shift by the row minimum and rescale by the mean gap: the conditional
    // distribution is unchanged, and beta = 1 is a sensible starting point.
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, row[j]);
    }
    double mean_gap = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) mean_gap += row[j] - dmin;
    }
    mean_gap /= static_cast<double>(n - 1);
    const double unit = mean_gap > 0.0 ? mean_gap : 1.0;

    std::vector<double> gap(n, 0.0), w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) gap[j] = j == i ? 0.0 : (row[j] - dmin) / unit;

    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double entropy = 0.0, sum = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      sum = 0.0;
      double weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        w[j] = std::exp(-beta * gap[j]);
        sum += w[j];
        weighted += gap[j] * w[j];
      }
      entropy = std::log(sum) + beta * weighted / sum;
      const double diff = entropy - target;
      if (std::abs(diff) < 1e-12 || (!std::isinf(hi) && hi - lo <= 1e-15 * beta)) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    if (std::abs(std::exp(entropy) - perplexity) > 1e-4) ++unconverged;
    for (std::size_t j = 0; j < n; ++j) out.p[i * n + j] = j == i ? 0.0 : w[j] / sum;
    out.beta[i] = beta / unit;
  }
  out.unconverged = unconverged;
  return out;
}

std::vector<double> joint_probabilities(const ConditionalProbabilities& conditional) {
  const auto n = conditional.n;
  std::vector<double> joint(n * n, 0.0);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (conditional.p[i * n + j] + conditional.p[j * n + i]) * scale;
      joint[i * n + j] = v;
      joint[j * n + i] = v;
    }
  }
  return joint;
}

namespace {

double evaluate_objective(std::span<const double> joint, std::span<const Point2> points, std::span<Point2> gradient,
                          bool want_kl) {
  const auto n = points.size();
  const auto count = static_cast<std::int64_t>(n);
  // Row partial sums are reduced in index order so the result does not
  // depend on the thread count.
  std::vector<double> row_z(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = points[i][0] - points[j][0];
      const double dy = points[i][1] - points[j][1];
      z += 1.0 / (1.0 + dx * dx + dy * dy);
    }
    row_z[i] = z;
  }
  const double z = std::accumulate(row_z.begin(), row_z.end(), 0.0);

  std::vector<double> row_kl(n, 0.0);
  const bool want_gradient = !gradient.empty();
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double kl = 0.0, gx = 0.0, gy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = points[i][0] - points[j][0];
      const double dy = points[i][1] - points[j][1];
      const double w = 1.0 / (1.0 + dx * dx + dy * dy);
      const double q = w / z;
      const double p = joint[i * n + j];
      if (want_kl && p > 0.0) kl += p * std::log(p / q);
      if (want_gradient) {
        const double f = 4.0 * (p - q) * w;
        gx += f * dx;
        gy += f * dy;
      }
    }
    row_kl[i] = kl;
    if (want_gradient) gradient[i] = {gx, gy};
  }
  return std::accumulate(row_kl.begin(), row_kl.end(), 0.0);
}

}  // namespace

double kl_divergence(std::span<const double> joint, std::span<const Point2> points, std::span<Point2> gradient) {
  return evaluate_objective(joint, points, gradient, true);
}

Embedding tsne_embed(const PairwiseMatrix& distances, const TsneOptions& options) {
  const auto n = distances.size();
  if (options.iterations < 0) throw UsageError("iteration count must be non-negative");
  auto conditional = conditional_probabilities(distances, options.perplexity);
  const auto joint = joint_probabilities(conditional);

  Embedding e;
  e.ids = distances.ids();
  e.config = options;
  e.unconverged_rows = conditional.unconverged;
  e.points.resize(n);
  SampleRng rng(options.seed);
  for (auto& p : e.points) p = {rng.normal() * options.init_scale, rng.normal() * options.init_scale};

  const double learning_rate = options.learning_rate.value_or(std::max(static_cast<double>(n) / 12.0, 50.0));
  std::vector<double> exaggerated(joint);
  for (double& v : exaggerated) v *= options.exaggeration;

  std::vector<Point2> grad(n), update(n, Point2{0.0, 0.0}), gains(n, Point2{1.0, 1.0});
  double momentum = options.momentum;
  for (int iter = 0; iter < options.iterations; ++iter) {
    const bool exaggerate = iter < options.exaggeration_iterations;
    if (iter == options.momentum_switch) momentum = options.final_momentum;
    evaluate_objective(exaggerate ? exaggerated : joint, e.points, grad, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        auto& gain = gains[i][d];
        gain = (grad[i][d] > 0.0) != (update[i][d] > 0.0) ? gain + 0.2 : gain * 0.8;
        gain = std::max(gain, 0.01);
        update[i][d] = momentum * update[i][d] - learning_rate * gain * grad[i][d];
        e.points[i][d] += update[i][d];
      }
    }
    Point2 mean{0.0, 0.0};
    for (const auto& p : e.points) {
      mean[0] += p[0];
      mean[1] += p[1];
    }
    mean[0] /= static_cast<double>(n);
    mean[1] /= static_cast<double>(n);
    for (auto& p : e.points) {
      p[0] -= mean[0];
      p[1] -= mean[1];
    }
  }
  e.kl_divergence = kl_divergence(joint, e.points);
  for (const auto& p : e.points) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw Error("t-SNE diverged to non-finite coordinates");
  }
  return e;
}

// ---------------------------------------------------------------------------
// Bandwidth and mean shift

double auto_bandwidth(std::span<const Point2> points, std::size_t k, BandwidthReading reading) {
  const auto n = points.size();
  if (k == 0 || k >= n) throw UsageError(fmt::format("bandwidth neighbor count k={} must be in 1..{}", k, n - 1));
  std::vector<double> per_point(n, 0.0);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<double> dist;
#pragma omp for schedule(static)
    for (std::int64_t ii = 0; ii < count; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      dist.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) dist.push_back(std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]));
      }
      std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
      if (reading == BandwidthReading::kth_neighbor) {
        per_point[i] = dist[k - 1];
      } else {
        std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));
        per_point[i] = std::accumulate(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
                       static_cast<double>(k);
      }
    }
  }
  const double sigma = std::accumulate(per_point.begin(), per_point.end(), 0.0) / static_cast<double>(n);
  if (!(sigma > 0.0)) throw DataError("bandwidth is zero: all points coincide");
  return sigma;
}

namespace {

// One mean-shift step from x; returns false when every kernel weight vanished.
bool shift_once(std::span<const Point2> points, double inv_two_sigma2, Point2& x) {
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (const auto& y : points) {
    const double dx = x[0] - y[0];
    const double dy = x[1] - y[1];
    const double w = std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
    sx += w * y[0];
    sy += w * y[1];
    sw += w;
  }
  if (!(sw > 0.0)) return false;
  x = {sx / sw, sy / sw};
  return true;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("mean-shift bandwidth must be positive");
}

}  // namespace

std::vector<double> mean_shift_trace(std::span<const Point2> points, double sigma, std::size_t start,
                                     const MeanShiftOptions& options) {
  check_sigma(sigma);
  if (start >= points.size()) throw UsageError("start index outside point set");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> shifts;
  Point2 x = points[start];
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Point2 prev = x;
    if (!shift_once(points, inv, x)) break;
    const double step = std::hypot(x[0] - prev[0], x[1] - prev[1]);
    shifts.push_back(step);
    if (step < options.tolerance * sigma) break;
  }
  return shifts;
}

std::vector<std::size_t> ClusterLabeling::cluster_sizes() const {
  std::vector<std::size_t> sizes(modes.size(), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

ClusterLabeling mean_shift(std::span<const Point2> points, double sigma, const MeanShiftOptions& options) {
  check_sigma(sigma);
  const auto n = points.size();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<Point2> converged(points.begin(), points.end());
  const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    auto& x = converged[static_cast<std::size_t>(ii)];
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      Point2 prev = x;
      if (!shift_once(points, inv, x)) break;
      if (std::hypot(x[0] - prev[0], x[1] - prev[1]) < options.tolerance * sigma) break;
    }
  }

  // Greedy merge in point order; the first point reaching a basin seeds its mode.
  const double radius = options.merge_radius * sigma;
  std::vector<Point2> seeds;
  std::vector<int> raw(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int found = -1;
    for (std::size_t m = 0; m < seeds.size(); ++m) {
      if (std::hypot(converged[i][0] - seeds[m][0], converged[i][1] - seeds[m][1]) < radius) {
        found = static_cast<int>(m);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(seeds.size());
      seeds.push_back(converged[i]);
    }
    raw[i] = found;
  }

  std::vector<std::size_t> sizes(seeds.size(), 0);
  for (int l : raw) ++sizes[static_cast<std::size_t>(l)];
  std::vector<int> order(seeds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  std::vector<int> rank(seeds.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r);

  ClusterLabeling out;
  out.bandwidth = sigma;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = rank[static_cast<std::size_t>(raw[i])];
  out.modes.resize(seeds.size());
  for (std::size_t m = 0; m < seeds.size(); ++m) out.modes[static_cast<std::size_t>(rank[m])] = seeds[m];
  return out;
}

// ---------------------------------------------------------------------------
// Text exports

void write_embedding(const Embedding& e, std::ostream& out, std::string_view header) {
  out << "# id\tx\ty";
  if (!header.empty()) out << '\t' << header;
  out << '\n';
  for (std::size_t i = 0; i < e.ids.size(); ++i) out << fmt::format("{}\t{}\t{}\n", e.ids[i], e.points[i][0], e.points[i][1]);
}

Embedding read_embedding(std::istream& in) {
  Embedding e;
  std::string line;
  while (std::getline(in, line)) {
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = detail::split(body, '\t');
    if (fields.size() != 3) throw DataError("malformed embedding line '" + std::string(body) + "'");
    e.ids.emplace_back(fields[0]);
    e.points.push_back({std::stod(std::string(fields[1])), std::stod(std::string(fields[2]))});
  }
  return e;
}

void write_labels(const std::vector<std::string>& ids, const ClusterLabeling& labeling, std::ostream& out,
                  std::string_view header) {
  out << "# id\tcluster";
  if (!header.empty()) out << '\t' << header;
  out << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << '\t' << labeling.labels[i] << '\n';
}

ClusterLabeling read_labels(std::istream& in, std::vector<std::string>* ids) {
  ClusterLabeling l;
  std::string line;
  int max_label = -1;
  while (std::getline(in, line)) {
    auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      for (auto part : detail::split(body, '\t')) {
        auto f = detail::trim(part);
        if (f.starts_with("sigma=")) l.bandwidth = std::stod(std::string(f.substr(6)));
      }
      continue;
    }
    auto fields = detail::split(body, '\t');
    if (fields.size() != 2) throw DataError("malformed label line '" + std::string(body) + "'");
    if (ids != nullptr) ids->emplace_back(fields[0]);
    int label = std::stoi(std::string(fields[1]));
    if (label < 0) throw DataError("negative cluster label");
    l.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  l.modes.assign(static_cast<std::size_t>(max_label + 1), Point2{0.0, 0.0});
  return l;
}

}  // namespace lmap
