#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmap/mapping.hpp"

namespace lmap {

// Static SVG scatter plots: one <circle> per point, with a class attribute
// naming its cluster ("c<k>") or highlight state ("hit" / "other").

struct PlotOptions {
  double size = 800.0;    ///< canvas edge in pixels (per panel for grids)
  double radius = 2.5;
  bool jitter = false;    ///< spread exactly coincident points by up to one radius
  std::uint64_t seed = 0;
  std::string comment;    ///< emitted as an XML comment after the root element
};

/// Distinct, stable fill color for cluster `k`.
std::string cluster_color(int k);

void write_cluster_plot(std::span<const Point2> points, const ClusterLabeling& labeling, std::ostream& out,
                        const PlotOptions& options = {});

struct KeywordPanel {
  std::string keyword;
  std::vector<std::size_t> points;  ///< indices into the point set
};

/// Grid of panels, each highlighting the papers tagged with one keyword.
void write_keyword_grid(std::span<const Point2> points, std::span<const KeywordPanel> panels, std::ostream& out,
                        const PlotOptions& options = {}, int columns = 4);

}  // namespace lmap
