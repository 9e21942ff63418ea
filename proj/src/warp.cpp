#include "vshape/warp.hpp"

#include <cmath>
#include <string>

#include "vshape/marching_squares.hpp"

namespace vshape {

void CorrespondenceSet::validate() const {
  if (a_points.size() != b_points.size())
    throw Error("correspondence lists have different lengths");
  if (a_points.empty()) throw Error("empty correspondence set");
  const int d = a_points.front().dim();
  if (a_points.size() < static_cast<std::size_t>(d) + 1)
    throw InsufficientConstraintsError("need at least dim+1 correspondences");
  for (const Point& p : a_points)
    if (p.dim() != d) throw DimensionMismatchError("mixed dimensions in correspondence set");
  for (const Point& p : b_points)
    if (p.dim() != d) throw DimensionMismatchError("mixed dimensions in correspondence set");
}

Point DisplacementWarp::displacement(const Point& p) const {
  if (p.dim() != dim) throw DimensionMismatchError("warp evaluated at wrong dimension");
  Point d = Point::zero(dim);
  for (int a = 0; a < dim; ++a) d[a] = components[a].evaluate(p);
  return d;
}

Point DisplacementWarp::apply(const Point& p) const {
  const Point d = displacement(p);
  Point out = p;
  for (int a = 0; a < dim; ++a) out[a] += d[a];
  return out;
}

std::pair<DisplacementWarp, DisplacementWarp> build_halfway_warps(const CorrespondenceSet& corr,
                                                                  Kernel kernel,
                                                                  const SolveOptions& options) {
  corr.validate();
  const int d = corr.dim();
  const std::size_t k = corr.a_points.size();

  auto build = [&](const std::vector<Point>& at, const std::vector<Point>& toward) {
    DisplacementWarp w;
    w.dim = d;
    for (int axis = 0; axis < d; ++axis) {
      std::vector<Constraint> cons(k);
      for (std::size_t i = 0; i < k; ++i)
        cons[i] = {at[i], 0.5 * (toward[i][axis] - at[i][axis])};
      w.components.push_back(solve_model(cons, kernel, options));
    }
    return w;
  };

  return {build(corr.a_points, corr.b_points), build(corr.b_points, corr.a_points)};
}

std::vector<Point> apply_warp(const DisplacementWarp& w, const std::vector<Point>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(w.apply(p));
  return out;
}

ConstraintSet warp_constraint_set(const DisplacementWarp& w, const ConstraintSet& set) {
  if (set.dim != w.dim) throw DimensionMismatchError("warp/constraint dimension mismatch");
  ConstraintSet out;
  out.dim = set.dim;
  out.normal_of = set.normal_of;
  out.skipped_flat_gradient = set.skipped_flat_gradient;

  for (const Constraint& c : set.boundary) out.boundary.push_back({w.apply(c.position), c.value});
  out.normal.resize(set.normal.size());
  std::vector<char> placed(set.normal.size(), 0);

  // Paired normal constraints keep their offset distance along the warped
  // pair direction so the boundary/normal pairing stays consistent.
  for (std::size_t bi = 0; bi < set.boundary.size(); ++bi) {
    const int ni = bi < set.normal_of.size() ? set.normal_of[bi] : -1;
    if (ni < 0) continue;
    const Constraint& orig_b = set.boundary[bi];
    const Constraint& orig_n = set.normal[ni];
    const double dist = distance(orig_n.position, orig_b.position);
    const Point warped_b = out.boundary[bi].position;
    const Point warped_n = w.apply(orig_n.position);
    const double new_dist = distance(warped_n, warped_b);
    Point pos = warped_n;
    if (new_dist > 1e-12) {
      pos = warped_b;
      for (int a = 0; a < set.dim; ++a)
        pos[a] += (warped_n[a] - warped_b[a]) * (dist / new_dist);
    }
    out.normal[ni] = {pos, orig_n.value};
    placed[ni] = 1;
  }
  for (std::size_t ni = 0; ni < set.normal.size(); ++ni)
    if (!placed[ni]) out.normal[ni] = {w.apply(set.normal[ni].position), set.normal[ni].value};
  return out;
}

Point unwarp(const Point& lifted, const DisplacementWarp& w_a, const DisplacementWarp& w_b,
             double t_max) {
  const int d = lifted.dim() - 1;
  if (d != w_a.dim || d != w_b.dim)
    throw DimensionMismatchError("unwarp: lifted point does not match warp dimension");
  if (!(t_max > 0.0)) throw Error("unwarp: t_max must be positive");

  Point spatial = Point::zero(d);
  for (int a = 0; a < d; ++a) spatial[a] = lifted[a];
  const double tau = 2.0 * lifted[d] / t_max;

  Point out = lifted;
  if (tau <= 1.0) {
    const Point disp = w_a.displacement(spatial);
    for (int a = 0; a < d; ++a) out[a] += (1.0 - tau) * disp[a];
  } else {
    const Point disp = w_b.displacement(spatial);
    for (int a = 0; a < d; ++a) out[a] += (tau - 1.0) * disp[a];
  }
  return out;
}

std::vector<Polyline2D> warped_morph(const ConstraintSet& a, const ConstraintSet& b,
                                     const CorrespondenceSet& corr, double t_max, Kernel kernel,
                                     int n_frames, const FrameGrid& grid,
                                     const SolveOptions& options) {
  if (a.dim != 2 || b.dim != 2)
    throw DimensionMismatchError("warped_morph: shapes must be 2D");
  if (n_frames < 2) throw Error("warped_morph: need at least 2 frames");
  auto [w_a, w_b] = build_halfway_warps(corr, default_kernel(2), options);

  const ConstraintSet warped_a = warp_constraint_set(w_a, a);
  const ConstraintSet warped_b = warp_constraint_set(w_b, b);
  const MorphModel morph = build_morph(warped_a, warped_b, t_max, kernel, options);

  // Each output frame is the zero set of the unwarped field f(u(x, y, t)):
  // u carries an output-space point into the warped space the interpolant
  // lives in.  At t = 0, u(a_i) lands on the warped contour, so the
  // original shape A is recovered exactly at the correspondence points
  // (and B at t = t_max).
  std::vector<Polyline2D> frames;
  frames.reserve(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    const double t = t_max * f / (n_frames - 1);
    const RbfModel* model = &morph.model;
    const DisplacementWarp* wa = &w_a;
    const DisplacementWarp* wb = &w_b;
    const Field2 field = [model, wa, wb, t, t_max](double x, double y) {
      return model->evaluate(unwarp(Point{x, y, t}, *wa, *wb, t_max));
    };
    const SampledGrid samples = sample_grid(field, grid.bounds, {grid.res, grid.res});
    frames.push_back(marching_squares(samples, 0.0, field));
  }
  return frames;
}

}  // namespace vshape
