#include "vshape/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "vshape/types.hpp"

namespace vshape {

double point_segment_distance(const std::array<double, 2>& p, const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
  const double vx = b[0] - a[0];
  const double vy = b[1] - a[1];
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / len2, 0.0, 1.0);
  const double dx = p[0] - (a[0] + t * vx);
  const double dy = p[1] - (a[1] + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

double point_to_contours(const std::array<double, 2>& p, const Polyline2D& c) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& loop : c.loops) {
    const std::size_t n = loop.points.size();
    if (n == 1) {
      best = std::min(best, point_segment_distance(p, loop.points[0], loop.points[0]));
      continue;
    }
    const std::size_t segs = loop.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i)
      best = std::min(best, point_segment_distance(p, loop.points[i], loop.points[(i + 1) % n]));
  }
  return best;
}

double one_sided(const Polyline2D& a, const Polyline2D& b) {
  double worst = 0.0;
  for (const auto& loop : a.loops)
    for (const auto& p : loop.points) worst = std::max(worst, point_to_contours(p, b));
  return worst;
}

}  // namespace

double hausdorff_distance(const Polyline2D& a, const Polyline2D& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(one_sided(a, b), one_sided(b, a));
}

std::vector<std::array<double, 2>> resample_loop(const Polyline2D::Loop& loop, double step) {
  std::vector<std::array<double, 2>> out;
  const std::size_t n = loop.points.size();
  if (n < 2 || step <= 0.0) return loop.points;

  double total = 0.0;
  const std::size_t segs = loop.closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const auto& a = loop.points[i];
    const auto& b = loop.points[(i + 1) % n];
    total += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  if (total <= 0.0) return loop.points;

  const int samples = std::max(3, static_cast<int>(std::round(total / step)));
  const double ds = total / samples;
  out.reserve(samples);
  std::size_t seg = 0;
  double seg_pos = 0.0;
  for (int s = 0; s < samples; ++s) {
    double target = s * ds;
    // Advance along segments to arclength target.
    while (seg < segs) {
      const auto& a = loop.points[seg];
      const auto& b = loop.points[(seg + 1) % n];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (seg_pos + len >= target || seg == segs - 1) {
        const double t = len > 0.0 ? std::clamp((target - seg_pos) / len, 0.0, 1.0) : 0.0;
        out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
        break;
      }
      seg_pos += len;
      ++seg;
    }
  }
  return out;
}

double max_discrete_curvature(const Polyline2D& contours, double resample_step) {
  double worst = 0.0;
  for (const auto& loop : contours.loops) {
    const auto pts = resample_loop(loop, resample_step);
    const std::size_t n = pts.size();
    if (n < 3) continue;
    const std::size_t count = loop.closed ? n : n - 2;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& a = pts[loop.closed ? i : i];
      const auto& b = pts[loop.closed ? (i + 1) % n : i + 1];
      const auto& c = pts[loop.closed ? (i + 2) % n : i + 2];
      const double ux = b[0] - a[0], uy = b[1] - a[1];
      const double vx = c[0] - b[0], vy = c[1] - b[1];
      const double lu = std::hypot(ux, uy);
      const double lv = std::hypot(vx, vy);
      if (lu <= 0.0 || lv <= 0.0) continue;
      const double dot = std::clamp((ux * vx + uy * vy) / (lu * lv), -1.0, 1.0);
      const double theta = std::acos(dot);
      worst = std::max(worst, 2.0 * theta / (lu + lv));
    }
  }
  return worst;
}

namespace {

// Flood fill over a label image; 4- or 8-connectivity.
void fill(std::vector<int>& labels, const std::vector<char>& mask, int nx, int ny, int sx, int sy,
          int label, bool eight, char value) {
  std::queue<std::pair<int, int>> q;
  q.push({sx, sy});
  labels[static_cast<std::size_t>(sy) * nx + sx] = label;
  constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int dirs = eight ? 8 : 4;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop();
    for (int d = 0; d < dirs; ++d) {
      const int nxp = x + dx8[d];
      const int nyp = y + dy8[d];
      if (nxp < 0 || nyp < 0 || nxp >= nx || nyp >= ny) continue;
      const std::size_t idx = static_cast<std::size_t>(nyp) * nx + nxp;
      if (mask[idx] != value || labels[idx] != 0) continue;
      labels[idx] = label;
      q.push({nxp, nyp});
    }
  }
}

}  // namespace

RasterTopology raster_topology(const SampledGrid& grid, double iso) {
  if (grid.dim != 2) throw Error("raster_topology: grid is not 2D");
  const int nx = grid.res[0];
  const int ny = grid.res[1];
  std::vector<char> mask(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mask[static_cast<std::size_t>(j) * nx + i] = grid.at(i, j) >= iso ? 1 : 0;

  std::vector<int> labels(mask.size(), 0);
  RasterTopology topo;
  int next = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      if (mask[idx] == 1 && labels[idx] == 0) {
        fill(labels, mask, nx, ny, i, j, ++next, /*eight=*/false, 1);
        ++topo.components;
      }
    }

  std::fill(labels.begin(), labels.end(), 0);
  next = 0;
  std::vector<char> touches_border;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      if (mask[idx] == 0 && labels[idx] == 0) {
        fill(labels, mask, nx, ny, i, j, ++next, /*eight=*/true, 0);
        touches_border.push_back(0);
      }
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i != 0 && j != 0 && i != nx - 1 && j != ny - 1) continue;
      const int l = labels[static_cast<std::size_t>(j) * nx + i];
      if (l > 0) touches_border[l - 1] = 1;
    }
  for (char t : touches_border)
    if (!t) ++topo.holes;
  return topo;
}

RasterMoments raster_moments(const SampledGrid& grid, double iso) {
  if (grid.dim != 2) throw Error("raster_moments: grid is not 2D");
  const int nx = grid.res[0];
  const int ny = grid.res[1];
  const double cell = grid.step(0) * grid.step(1);
  RasterMoments m;
  double wsum = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (grid.at(i, j) >= iso) {
        wsum += 1.0;
        m.centroid_x += grid.coord(0, i);
        m.centroid_y += grid.coord(1, j);
      }
  if (wsum > 0.0) {
    m.centroid_x /= wsum;
    m.centroid_y /= wsum;
  }
  m.area = wsum * cell;
  return m;
}

}  // namespace vshape
