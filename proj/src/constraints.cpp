#include "vshape/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vshape/grid.hpp"
#include "vshape/marching_squares.hpp"
#include "vshape/measure.hpp"

namespace vshape {

double GrayImage::sample(double x, double y) const {
  const int i0 = std::clamp(static_cast<int>(std::floor(x)), 0, width - 1);
  const int j0 = std::clamp(static_cast<int>(std::floor(y)), 0, height - 1);
  const int i1 = std::min(i0 + 1, width - 1);
  const int j1 = std::min(j0 + 1, height - 1);
  const double tx = x - i0;
  const double ty = y - j0;
  const double a = at(i0, j0) * (1.0 - tx) + at(i1, j0) * tx;
  const double b = at(i0, j1) * (1.0 - tx) + at(i1, j1) * tx;
  return a * (1.0 - ty) + b * ty;
}

void GrayImage::validate() const {
  if (width <= 0 || height <= 0) throw Error("image has non-positive dimensions");
  if (pixels.size() != static_cast<std::size_t>(width) * height)
    throw Error("image pixel count does not match dimensions");
  for (double v : pixels)
    if (!(v >= 0.0 && v <= 255.0))
      throw Error("image pixel value out of range [0,255]");
}

std::vector<Constraint> ConstraintSet::all() const {
  std::vector<Constraint> out;
  out.reserve(boundary.size() + normal.size());
  out.insert(out.end(), boundary.begin(), boundary.end());
  out.insert(out.end(), normal.begin(), normal.end());
  return out;
}

std::array<double, 2> image_gradient(const GrayImage& img, double x, double y) {
  if (x < 1.0 || y < 1.0 || x > img.width - 2.0 || y > img.height - 2.0)
    throw BorderError("image_gradient: position (" + std::to_string(x) + "," + std::to_string(y) +
                      ") is within one pixel of the border");
  return {0.5 * (img.sample(x + 1.0, y) - img.sample(x - 1.0, y)),
          0.5 * (img.sample(x, y + 1.0) - img.sample(x, y - 1.0))};
}

namespace {

struct Crossing {
  double x = 0.0;
  double y = 0.0;
};

// East/south neighbor scan; crossing position by linear interpolation of
// the two pixel values.
std::vector<Crossing> find_crossings(const GrayImage& img, double m) {
  img.validate();
  std::vector<Crossing> out;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double v = img.at(x, y);
      if (x + 1 < img.width) {
        const double e = img.at(x + 1, y);
        if ((v < m && e > m) || (v > m && e < m)) {
          const double t = (m - v) / (e - v);
          out.push_back({x + t, static_cast<double>(y)});
        }
      }
      if (y + 1 < img.height) {
        const double s = img.at(x, y + 1);
        if ((v < m && s > m) || (v > m && s < m)) {
          const double t = (m - v) / (s - v);
          out.push_back({static_cast<double>(x), y + t});
        }
      }
    }
  }
  return out;
}

}  // namespace

ConstraintSet image_to_constraints(const GrayImage& img, double m,
                                   const ImageConstraintOptions& options) {
  if (options.normal_offset <= 0.0) throw Error("normal_offset must be positive");
  if (options.normal_value <= 0.0) throw Error("normal constraint value must be positive");
  if (options.stride < 1) throw Error("stride must be >= 1");

  const auto crossings = find_crossings(img, m);
  if (crossings.empty())
    throw EmptyShapeError("no crossings of level " + std::to_string(m) + " found in image");

  ConstraintSet set;
  set.dim = 2;
  std::size_t kept = 0;
  for (std::size_t idx = 0; idx < crossings.size(); ++idx) {
    if (idx % static_cast<std::size_t>(options.stride) != 0) continue;
    const auto& c = crossings[idx];
    // Gradient sampling needs one pixel of margin; crossings closer to the
    // border keep their boundary constraint but get a gradient from the
    // nearest valid position.
    const double gx = std::clamp(c.x, 1.0, img.width - 2.0);
    const double gy = std::clamp(c.y, 1.0, img.height - 2.0);
    const auto g = image_gradient(img, gx, gy);
    const double norm = std::hypot(g[0], g[1]);
    if (norm < 1e-9) {
      ++set.skipped_flat_gradient;
      continue;
    }
    set.boundary.push_back({Point{c.x, c.y}, 0.0});
    set.normal.push_back({Point{c.x + options.normal_offset * g[0] / norm,
                                c.y + options.normal_offset * g[1] / norm},
                          options.normal_value});
    set.normal_of.push_back(static_cast<int>(kept));
    ++kept;
  }
  if (set.boundary.empty())
    throw EmptyShapeError("all crossings were dropped (flat gradients)");
  return set;
}

ConstraintSet points_normals_to_constraints(const PointNormalCloud& cloud, double k,
                                            double normal_value) {
  if (k <= 0.0) throw Error("offset k must be positive");
  if (normal_value <= 0.0) throw Error("normal constraint value must be positive");
  if (cloud.points.size() != cloud.normals.size())
    throw Error("point and normal counts differ");
  if (cloud.points.empty()) throw EmptyShapeError("empty point cloud");

  ConstraintSet set;
  set.dim = 3;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    const Point& n = cloud.normals[i];
    if (p.dim() != 3 || n.dim() != 3) throw DimensionMismatchError("cloud entries must be 3D");
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(len - 1.0) > 1e-3)
      throw InvalidNormalError("normal " + std::to_string(i) + " has length " +
                               std::to_string(len));
    set.boundary.push_back({p, 0.0});
    set.normal.push_back({Point{p[0] - k * n[0], p[1] - k * n[1], p[2] - k * n[2]}, normal_value});
    set.normal_of.push_back(static_cast<int>(i));
  }
  return set;
}

Polyline2D image_iso_contours(const GrayImage& img, double m) {
  img.validate();
  SampledGrid g;
  g.dim = 2;
  g.bounds = Box{Point{0.0, 0.0}, Point{static_cast<double>(img.width - 1),
                                        static_cast<double>(img.height - 1)}};
  g.res = {img.width, img.height, 1};
  g.values = img.pixels;
  return marching_squares(g, m);
}

namespace {

template <bool Parallel>
SdfGrid sdf_impl(const GrayImage& img, double m) {
  const Polyline2D contours = image_iso_contours(img, m);
  if (contours.empty())
    throw EmptyShapeError("no crossings of level " + std::to_string(m) + " found in image");

  struct Seg {
    std::array<double, 2> a, b;
  };
  std::vector<Seg> segs;
  for (const auto& loop : contours.loops) {
    const std::size_t n = loop.points.size();
    const std::size_t count = loop.closed ? n : n - 1;
    for (std::size_t i = 0; i < count; ++i)
      segs.push_back({loop.points[i], loop.points[(i + 1) % n]});
  }

  SdfGrid sdf;
  sdf.width = img.width;
  sdf.height = img.height;
  sdf.values.assign(static_cast<std::size_t>(img.width) * img.height, 0.0);

#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::array<double, 2> p{static_cast<double>(x), static_cast<double>(y)};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& s : segs) best = std::min(best, point_segment_distance(p, s.a, s.b));
      sdf.at(x, y) = img.at(x, y) >= m ? best : -best;
    }
  }
  return sdf;
}

}  // namespace

SdfGrid signed_distance_field(const GrayImage& img, double m) { return sdf_impl<true>(img, m); }

SdfGrid signed_distance_field_serial(const GrayImage& img, double m) {
  return sdf_impl<false>(img, m);
}

}  // namespace vshape
