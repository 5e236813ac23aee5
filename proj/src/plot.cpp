#include "lmap/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "lmap/sampling.hpp"

namespace lmap {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps data coordinates into a square panel with a small margin.
struct Frame {
  double min_x = 0, min_y = 0, scale = 1, margin = 10, size = 800;

  Frame(std::span<const Point2> points, double panel, double pad) : margin(pad), size(panel) {
    double max_x = 0, max_y = 0;
    if (!points.empty()) {
      min_x = max_x = points[0][0];
      min_y = max_y = points[0][1];
    }
    for (const auto& p : points) {
      min_x = std::min(min_x, p[0]);
      max_x = std::max(max_x, p[0]);
      min_y = std::min(min_y, p[1]);
      max_y = std::max(max_y, p[1]);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
    scale = (panel - 2 * pad) / span;
  }
  double x(double v) const { return margin + (v - min_x) * scale; }
  double y(double v) const { return size - margin - (v - min_y) * scale; }
};

std::vector<Point2> jittered(std::span<const Point2> points, const PlotOptions& options, const Frame& frame) {
  std::vector<Point2> out(points.begin(), points.end());
  if (!options.jitter) return out;
  SampleRng rng(options.seed);
  const double amount = options.radius / frame.scale;
  for (auto& p : out) {
    p[0] += (2 * rng.unit() - 1) * amount;
    p[1] += (2 * rng.unit() - 1) * amount;
  }
  return out;
}

void header(std::ostream& out, double width, double height, const PlotOptions& options) {
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
      width, height);
  if (!options.comment.empty()) out << "<!-- " << xml_escape(options.comment) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string cluster_color(int k) {
  // Golden-angle hue walk, alternating lightness.
  const double hue = std::fmod(k * 137.50776405, 360.0);
  const int light = k % 2 == 0 ? 45 : 60;
  return fmt::format("hsl({:.1f},70%,{}%)", hue, light);
}

void write_cluster_plot(std::span<const Point2> points, const ClusterLabeling& labeling, std::ostream& out,
                        const PlotOptions& options) {
  Frame frame(points, options.size, 10.0);
  auto drawn = jittered(points, options, frame);
  header(out, options.size, options.size, options);
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const int k = labeling.labels.at(i);
    out << fmt::format("<circle class=\"c{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\"/>\n", k,
                       frame.x(drawn[i][0]), frame.y(drawn[i][1]), options.radius, cluster_color(k));
  }
  out << "</svg>\n";
}

void write_keyword_grid(std::span<const Point2> points, std::span<const KeywordPanel> panels, std::ostream& out,
                        const PlotOptions& options, int columns) {
  columns = std::max(1, columns);
  const auto count = static_cast<int>(panels.size());
  const int rows = std::max(1, (count + columns - 1) / columns);
  const double panel = options.size / 2;
  const double title = 18.0;
  Frame frame(points, panel, 8.0);
  auto drawn = jittered(points, options, frame);
  header(out, panel * std::min(columns, std::max(count, 1)), (panel + title) * rows, options);
  const double r = options.radius * 0.6;
  for (int p = 0; p < count; ++p) {
    const double ox = panel * (p % columns);
    const double oy = (panel + title) * (p / columns);
    const auto& kp = panels[static_cast<std::size_t>(p)];
    out << fmt::format("<g transform=\"translate({:.0f},{:.0f})\">\n", ox, oy);
    out << fmt::format("<text x=\"{:.1f}\" y=\"14\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                       panel / 2, xml_escape(kp.keyword));
    out << fmt::format("<g transform=\"translate(0,{:.0f})\">\n", title);
    std::vector<char> hit(drawn.size(), 0);
    for (auto i : kp.points) hit.at(i) = 1;
    for (std::size_t i = 0; i < drawn.size(); ++i) {
      if (hit[i]) continue;
      out << fmt::format("<circle class=\"other\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"#d0d0d0\"/>\n",
                         frame.x(drawn[i][0]), frame.y(drawn[i][1]), r);
    }
    for (auto i : kp.points) {
      out << fmt::format("<circle class=\"hit\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"#c0392b\"/>\n",
                         frame.x(drawn[i][0]), frame.y(drawn[i][1]), r);
    }
    out << "</g>\n</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace lmap
