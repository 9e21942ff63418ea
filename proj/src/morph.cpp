#include "vshape/morph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vshape/marching_squares.hpp"

namespace vshape {

namespace {

Constraint lift(const Constraint& c, double t) {
  Point p = Point::zero(c.position.dim() + 1);
  for (int a = 0; a < c.position.dim(); ++a) p[a] = c.position[a];
  p[c.position.dim()] = t;
  return {p, c.value};
}

Constraint lift2(const Constraint& c, double s, double t) {
  Point p = Point::zero(c.position.dim() + 2);
  for (int a = 0; a < c.position.dim(); ++a) p[a] = c.position[a];
  p[c.position.dim()] = s;
  p[c.position.dim() + 1] = t;
  return {p, c.value};
}

void append_lifted(ConstraintSet& out, const ConstraintSet& in, double t) {
  const int base = static_cast<int>(out.normal.size());
  for (const Constraint& c : in.boundary) out.boundary.push_back(lift(c, t));
  for (const Constraint& c : in.normal) out.normal.push_back(lift(c, t));
  for (int idx : in.normal_of) out.normal_of.push_back(idx < 0 ? -1 : idx + base);
}

void append_lifted2(ConstraintSet& out, const ConstraintSet& in, double s, double t) {
  const int base = static_cast<int>(out.normal.size());
  for (const Constraint& c : in.boundary) out.boundary.push_back(lift2(c, s, t));
  for (const Constraint& c : in.normal) out.normal.push_back(lift2(c, s, t));
  for (int idx : in.normal_of) out.normal_of.push_back(idx < 0 ? -1 : idx + base);
}

}  // namespace

ConstraintSet embed_pair(const ConstraintSet& a, const ConstraintSet& b, double t_max) {
  if (a.dim != b.dim)
    throw DimensionMismatchError("embed_pair: shape dimensions differ (" + std::to_string(a.dim) +
                                 " vs " + std::to_string(b.dim) + ")");
  if (!(t_max > 0.0)) throw Error("embed_pair: t_max must be positive");
  if (a.size() == 0 || b.size() == 0)
    throw InsufficientConstraintsError("embed_pair: both shapes need constraints");
  ConstraintSet out;
  out.dim = a.dim + 1;
  append_lifted(out, a, 0.0);
  append_lifted(out, b, t_max);
  return out;
}

MorphModel build_morph(const ConstraintSet& a, const ConstraintSet& b, double t_max,
                       Kernel kernel, const SolveOptions& options, SolveStats* stats) {
  const ConstraintSet lifted = embed_pair(a, b, t_max);
  MorphModel morph;
  morph.source_dim = a.dim;
  morph.t_max = t_max;
  morph.model = solve_model(lifted.all(), kernel, options, stats);
  return morph;
}

Field2 slice2(const MorphModel& morph, double t) {
  if (morph.source_dim != 2) throw DimensionMismatchError("slice2: morph is not over 2D shapes");
  const RbfModel* m = &morph.model;
  return [m, t](double x, double y) { return m->evaluate({x, y, t}); };
}

Field3 slice3(const MorphModel& morph, double t) {
  if (morph.source_dim != 3) throw DimensionMismatchError("slice3: morph is not over 3D shapes");
  const RbfModel* m = &morph.model;
  return [m, t](double x, double y, double z) { return m->evaluate({x, y, z, t}); };
}

FrameGrid default_frame_grid(const ConstraintSet& a, const ConstraintSet& b, int res,
                             double pad_fraction) {
  std::vector<Point> pts;
  for (const auto& c : a.boundary) pts.push_back(c.position);
  for (const auto& c : a.normal) pts.push_back(c.position);
  for (const auto& c : b.boundary) pts.push_back(c.position);
  for (const auto& c : b.normal) pts.push_back(c.position);
  Box box = bounding_box(pts);
  FrameGrid g;
  g.bounds = box.padded(pad_fraction * box.max_extent());
  g.res = res;
  return g;
}

std::vector<Polyline2D> morph_sequence(const MorphModel& morph, int n_frames,
                                       const FrameGrid& grid) {
  if (n_frames < 2) throw Error("morph_sequence: need at least 2 frames");
  if (morph.source_dim != 2)
    throw DimensionMismatchError("morph_sequence: only 2D morphs extract to contours");
  std::vector<Polyline2D> frames;
  frames.reserve(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    const double t = morph.t_max * f / (n_frames - 1);
    const Field2 field = slice2(morph, t);
    const SampledGrid samples = sample_grid(field, grid.bounds, {grid.res, grid.res});
    frames.push_back(marching_squares(samples, 0.0, field));
  }
  return frames;
}

SdfGrid sdf_morph_baseline(const SdfGrid& a, const SdfGrid& b, double alpha) {
  if (a.width != b.width || a.height != b.height)
    throw DimensionMismatchError("sdf_morph_baseline: grid sizes differ");
  SdfGrid out;
  out.width = a.width;
  out.height = a.height;
  out.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out.values[i] = (1.0 - alpha) * a.values[i] + alpha * b.values[i];
  return out;
}

ConstraintSet embed_influence(const ConstraintSet& a, const ConstraintSet& b,
                              const ConstraintSet& c, const InfluencePlacement& placement) {
  if (a.dim != b.dim || (c.size() > 0 && a.dim != c.dim))
    throw DimensionMismatchError("embed_influence: shape dimensions differ");
  if (a.size() == 0 || b.size() == 0)
    throw InsufficientConstraintsError("embed_influence: shapes A and B need constraints");
  const double area2 =
      (placement.b[0] - placement.a[0]) * (placement.c[1] - placement.a[1]) -
      (placement.b[1] - placement.a[1]) * (placement.c[0] - placement.a[0]);
  if (std::abs(area2) < 1e-12)
    throw Error("embed_influence: degenerate (collinear) placement");
  ConstraintSet out;
  out.dim = a.dim + 2;
  append_lifted2(out, a, placement.a[0], placement.a[1]);
  append_lifted2(out, b, placement.b[0], placement.b[1]);
  append_lifted2(out, c, placement.c[0], placement.c[1]);
  return out;
}

Field2 influence_slice2(const RbfModel& model, double s, double t) {
  if (model.dim != 4)
    throw DimensionMismatchError("influence_slice2: model dimension must be 4");
  const RbfModel* m = &model;
  return [m, s, t](double x, double y) { return m->evaluate({x, y, s, t}); };
}

Field3 influence_slice3(const RbfModel& model, double s, double t) {
  if (model.dim != 5)
    throw DimensionMismatchError("influence_slice3: model dimension must be 5");
  const RbfModel* m = &model;
  return [m, s, t](double x, double y, double z) { return m->evaluate({x, y, z, s, t}); };
}

}  // namespace vshape
