// Geometric comparison helpers: contour distances, discrete curvature,
// and topology of thresholded rasterizations.
#pragma once

#include <array>
#include <vector>

#include "vshape/geometry.hpp"
#include "vshape/grid.hpp"

namespace vshape {

double point_segment_distance(const std::array<double, 2>& p, const std::array<double, 2>& a,
                              const std::array<double, 2>& b);

// Symmetric Hausdorff distance between two contour sets: max over vertices
// of one of the distance to the other's segments, both ways.
double hausdorff_distance(const Polyline2D& a, const Polyline2D& b);

// Resamples a loop at (approximately) uniform arclength spacing.
std::vector<std::array<double, 2>> resample_loop(const Polyline2D::Loop& loop, double step);

// Max turning-angle curvature over all loops after uniform resampling:
// kappa_i = 2 theta_i / (|e_{i-1}| + |e_i|).
double max_discrete_curvature(const Polyline2D& contours, double resample_step);

// Connected-component topology of {f >= iso} on a 2D grid:
// 4-connectivity for foreground, 8-connectivity for background.
// Euler characteristic = components - holes (holes are background
// components not touching the grid border).
struct RasterTopology {
  int components = 0;
  int holes = 0;
  long euler() const { return components - holes; }
};
RasterTopology raster_topology(const SampledGrid& grid, double iso);

// Area and centroid of the thresholded region {f >= iso}, in grid units.
struct RasterMoments {
  double area = 0.0;       // cell-count area in world units
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};
RasterMoments raster_moments(const SampledGrid& grid, double iso);

}  // namespace vshape
