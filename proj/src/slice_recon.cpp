#include "vshape/slice_recon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vshape/marching_cubes.hpp"

namespace vshape {

void SliceFrame::validate() const {
  if (origin.dim() != 3) throw DimensionMismatchError("slice frame origin must be 3D");
  auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  if (std::abs(dot(axis_u, axis_u) - 1.0) > 1e-9 || std::abs(dot(axis_v, axis_v) - 1.0) > 1e-9 ||
      std::abs(dot(axis_u, axis_v)) > 1e-9)
    throw Error("slice frame axes are not orthonormal");
}

Point SliceFrame::map(double u, double v) const {
  return {origin[0] + u * axis_u[0] + v * axis_v[0], origin[1] + u * axis_u[1] + v * axis_v[1],
          origin[2] + u * axis_u[2] + v * axis_v[2]};
}

namespace {

void append_at_z(ConstraintSet& out, const ConstraintSet& slice, double z) {
  if (slice.dim != 2) throw DimensionMismatchError("stack_parallel: slices must be 2D");
  const int base = static_cast<int>(out.normal.size());
  for (const Constraint& c : slice.boundary)
    out.boundary.push_back({Point{c.position[0], c.position[1], z}, c.value});
  for (const Constraint& c : slice.normal)
    out.normal.push_back({Point{c.position[0], c.position[1], z}, c.value});
  for (int idx : slice.normal_of) out.normal_of.push_back(idx < 0 ? -1 : idx + base);
}

}  // namespace

ConstraintSet stack_parallel(const std::vector<ConstraintSet>& slices,
                             const std::vector<double>& spacings) {
  if (slices.empty()) throw EmptyShapeError("stack_parallel: no slices");
  if (spacings.size() + 1 != slices.size())
    throw Error("stack_parallel: need one spacing per gap (" +
                std::to_string(slices.size() - 1) + "), got " + std::to_string(spacings.size()));
  for (double s : spacings)
    if (!(s > 0.0)) throw Error("stack_parallel: spacings must be positive");

  ConstraintSet out;
  out.dim = 3;
  double z = 0.0;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (i > 0) z += spacings[i - 1];
    append_at_z(out, slices[i], z);
  }
  return out;
}

ConstraintSet place_oriented(const std::vector<OrientedSlice>& slices, PlacementReport* report) {
  if (slices.empty()) throw EmptyShapeError("place_oriented: no slices");
  for (const auto& s : slices) s.frame.validate();

  struct Placed {
    Constraint c;
    std::size_t slice;
    bool is_boundary;
    int pair_index;  // within-slice normal index for boundary constraints
  };
  std::vector<Placed> placed;
  for (std::size_t si = 0; si < slices.size(); ++si) {
    const auto& s = slices[si];
    if (s.constraints.dim != 2)
      throw DimensionMismatchError("place_oriented: slice constraints must be 2D");
    for (std::size_t bi = 0; bi < s.constraints.boundary.size(); ++bi) {
      const Constraint& c = s.constraints.boundary[bi];
      placed.push_back({{s.frame.map(c.position[0], c.position[1]), c.value},
                        si,
                        true,
                        bi < s.constraints.normal_of.size() ? s.constraints.normal_of[bi] : -1});
    }
    for (const Constraint& c : s.constraints.normal)
      placed.push_back({{s.frame.map(c.position[0], c.position[1]), c.value}, si, false, -1});
  }

  // Collision handling between slices: exact duplicates are an error,
  // near-duplicates are merged keeping the first.
  ConstraintSet out;
  out.dim = 3;
  std::vector<Placed> kept;
  std::size_t merged = 0;
  for (const auto& p : placed) {
    bool drop = false;
    for (const auto& q : kept) {
      if (q.c.position == p.c.position && q.slice != p.slice)
        throw DuplicateCenterError("place_oriented: slices " + std::to_string(q.slice) + " and " +
                                       std::to_string(p.slice) +
                                       " place a constraint at identical 3D coordinates",
                                   q.slice, p.slice);
      if (distance(q.c.position, p.c.position) < 1e-6) {
        drop = true;
        break;
      }
    }
    if (drop) {
      ++merged;
      continue;
    }
    kept.push_back(p);
  }
  if (report) report->merged = merged;

  // Rebuild the boundary/normal split; pairings are not preserved across
  // merges (they are not needed downstream of placement).
  for (const auto& p : kept) {
    if (p.is_boundary) {
      out.boundary.push_back(p.c);
      out.normal_of.push_back(-1);
    } else {
      out.normal.push_back(p.c);
    }
  }
  return out;
}

ReconstructResult reconstruct(const ConstraintSet& constraints, Kernel kernel, int resolution,
                              double max_spacing, const SolveOptions& options,
                              SolveStats* stats) {
  if (constraints.dim != 3)
    throw DimensionMismatchError("reconstruct: constraints must be 3D");
  if (resolution < 2) throw Error("reconstruct: resolution must be >= 2");

  ReconstructResult result;
  result.model = solve_model(constraints.all(), kernel, options, stats);

  std::vector<Point> pts;
  for (const auto& c : constraints.boundary) pts.push_back(c.position);
  for (const auto& c : constraints.normal) pts.push_back(c.position);
  Box box = bounding_box(pts);
  const double pad = std::max(2.0 * max_spacing, 0.2 * box.diagonal());
  result.extraction_bounds = box.padded(pad);

  const RbfModel* m = &result.model;
  const Field3 field = [m](double x, double y, double z) { return m->evaluate({x, y, z}); };
  const SampledGrid grid =
      sample_grid(field, result.extraction_bounds, {resolution, resolution, resolution});
  result.mesh = marching_cubes(grid, 0.0);
  return result;
}

}  // namespace vshape
