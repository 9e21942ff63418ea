#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "vshape/slice_recon.hpp"

using namespace vshape;
using vshape::testing::circle_constraints;
using vshape::testing::TestRng;

namespace {

// Elliptical contour with inward normal constraints, a synthetic stand-in
// for one tomography slice.
ConstraintSet ellipse_slice(double cx, double cy, double rx, double ry, int count,
                            double offset) {
  ConstraintSet set;
  set.dim = 2;
  for (int i = 0; i < count; ++i) {
    const double ang = 2.0 * M_PI * i / count;
    const double px = cx + rx * std::cos(ang);
    const double py = cy + ry * std::sin(ang);
    // Outward normal of an axis-aligned ellipse.
    double nx = std::cos(ang) / rx, ny = std::sin(ang) / ry;
    const double len = std::hypot(nx, ny);
    nx /= len;
    ny /= len;
    set.boundary.push_back({Point{px, py}, 0.0});
    set.normal.push_back({Point{px - offset * nx, py - offset * ny}, 1.0});
    set.normal_of.push_back(i);
  }
  return set;
}

std::vector<ConstraintSet> phantom_slices() {
  // Five stacked ellipses, bulging in the middle like a joint cross
  // section.
  return {ellipse_slice(0.0, 0.0, 0.30, 0.22, 24, 0.02),
          ellipse_slice(0.02, 0.0, 0.38, 0.30, 24, 0.02),
          ellipse_slice(0.05, 0.0, 0.46, 0.36, 24, 0.02),
          ellipse_slice(0.02, 0.0, 0.38, 0.30, 24, 0.02),
          ellipse_slice(0.0, 0.0, 0.28, 0.24, 24, 0.02)};
}

constexpr double kPhantomGap = 0.35;

}  // namespace

TEST_CASE("stack_parallel: cumulative spacing positions") {
  const std::vector<ConstraintSet> slices(5, circle_constraints(0.0, 0.0, 0.5, 8, 0.02));
  const ConstraintSet stacked = stack_parallel(slices, {1.0, 1.0, 3.0, 1.0});
  CHECK(stacked.dim == 3);
  REQUIRE(stacked.boundary.size() == 40);
  const double expected_z[5] = {0.0, 1.0, 2.0, 5.0, 6.0};
  for (int s = 0; s < 5; ++s)
    for (int i = 0; i < 8; ++i) CHECK(stacked.boundary[8 * s + i].position[2] == expected_z[s]);

  CHECK_THROWS_AS(stack_parallel(slices, {1.0, 1.0, 1.0}), Error);       // wrong gap count
  CHECK_THROWS_AS(stack_parallel(slices, {1.0, 0.0, 1.0, 1.0}), Error);  // nonpositive spacing
}

TEST_CASE("stack_parallel of two slices equals embed_pair with matching separation") {
  const ConstraintSet a = circle_constraints(0.1, 0.2, 0.4, 10, 0.02);
  const ConstraintSet stacked = stack_parallel({a, a}, {1.0});
  for (std::size_t i = 0; i < a.boundary.size(); ++i) {
    CHECK(stacked.boundary[i].position[2] == 0.0);
    CHECK(stacked.boundary[a.boundary.size() + i].position[2] == 1.0);
  }
}

TEST_CASE("phantom reconstruction: zero set passes through all contours") {
  const auto slices = phantom_slices();
  const ConstraintSet combined = stack_parallel(slices, {kPhantomGap, kPhantomGap, kPhantomGap, kPhantomGap});
  SolveStats stats;
  const ReconstructResult result =
      reconstruct(combined, Kernel::cubic, 33, kPhantomGap, {}, &stats);

  for (const auto& c : combined.boundary)
    CHECK(std::abs(result.model.evaluate(c.position)) <= 1e-5);
  for (const auto& c : combined.normal) CHECK(result.model.evaluate(c.position) > 0.0);
  CHECK(!result.mesh.empty());
}

TEST_CASE("phantom reconstruction: gradient is continuous across slice planes") {
  const auto slices = phantom_slices();
  const ConstraintSet combined = stack_parallel(slices, {kPhantomGap, kPhantomGap, kPhantomGap, kPhantomGap});
  const ReconstructResult result = reconstruct(combined, Kernel::cubic, 17, kPhantomGap);

  // Probe the gradient just above and just below interior slice planes at
  // contour points; the two must agree closely.
  TestRng rng(51);
  int probes = 0;
  for (int s = 1; s <= 3; ++s) {
    const double z = kPhantomGap * s;
    for (int i = 0; i < 17; ++i) {
      const auto& c = slices[s].boundary[(i * 7) % slices[s].boundary.size()];
      const Point above{c.position[0], c.position[1], z + 1e-3};
      const Point below{c.position[0], c.position[1], z - 1e-3};
      const Point ga = result.model.gradient(above);
      const Point gb = result.model.gradient(below);
      double diff = 0.0, norm = 0.0;
      for (int ax = 0; ax < 3; ++ax) {
        diff += (ga[ax] - gb[ax]) * (ga[ax] - gb[ax]);
        norm += ga[ax] * ga[ax];
      }
      CHECK(std::sqrt(diff) <= 1e-2 * std::sqrt(norm));
      ++probes;
    }
  }
  CHECK(probes >= 50);
}

TEST_CASE("single contour closes with caps beyond the slice plane") {
  const ConstraintSet circle = circle_constraints(0.0, 0.0, 0.4, 24, 0.02);
  const ConstraintSet combined = stack_parallel({circle}, {});
  const ReconstructResult result = reconstruct(combined, Kernel::cubic, 33, 0.4);

  // f is positive at the contour center and must change sign along +z and
  // -z within 2x the contour radius: rounded caps close the surface.
  CHECK(result.model.evaluate({0.0, 0.0, 0.0}) > 0.0);
  auto first_sign_change = [&](double dir) {
    for (double z = 0.0; z <= 0.8; z += 0.01)
      if (result.model.evaluate({0.0, 0.0, dir * z}) < 0.0) return dir * z;
    return dir * 10.0;
  };
  CHECK(std::abs(first_sign_change(+1.0)) <= 0.8);
  CHECK(std::abs(first_sign_change(-1.0)) <= 0.8);
  // The mesh extends beyond the slice plane on both sides.
  double zmin = 0.0, zmax = 0.0;
  for (const auto& v : result.mesh.vertices) {
    zmin = std::min(zmin, v[2]);
    zmax = std::max(zmax, v[2]);
  }
  CHECK(zmin < -0.05);
  CHECK(zmax > 0.05);
}

TEST_CASE("nonuniform spacing: widening one gap extends the surface") {
  const ConstraintSet c = circle_constraints(0.0, 0.0, 0.4, 16, 0.02);
  const std::vector<ConstraintSet> slices(3, c);

  auto z_extent = [&](double gap) {
    const ConstraintSet combined = stack_parallel(slices, {0.25, gap});
    const ReconstructResult r = reconstruct(combined, Kernel::cubic, 17, std::max(0.25, gap));
    double zmin = 1e9, zmax = -1e9;
    for (const auto& v : r.mesh.vertices) {
      zmin = std::min(zmin, v[2]);
      zmax = std::max(zmax, v[2]);
    }
    return zmax - zmin;
  };
  CHECK(z_extent(0.5) > z_extent(0.25));
}

TEST_CASE("oriented frames: validation and identity mapping") {
  SliceFrame identity;
  identity.validate();
  const Point p = identity.map(0.3, 0.7);
  CHECK(p == Point{0.3, 0.7, 0.0});

  SliceFrame skew;
  skew.axis_u = {1.0, 0.0, 0.0};
  skew.axis_v = {0.6, 0.8, 0.0};  // unit but not orthogonal to u
  CHECK_THROWS_AS(skew.validate(), Error);

  SliceFrame long_axis;
  long_axis.axis_u = {2.0, 0.0, 0.0};
  CHECK_THROWS_AS(long_axis.validate(), Error);
}

TEST_CASE("place_oriented: identity frame matches stack at z = 0") {
  const ConstraintSet c = circle_constraints(0.1, -0.2, 0.35, 12, 0.02);
  OrientedSlice slice;
  slice.constraints = c;
  const ConstraintSet placed = place_oriented({slice});
  REQUIRE(placed.boundary.size() == c.boundary.size());
  for (std::size_t i = 0; i < c.boundary.size(); ++i) {
    CHECK(placed.boundary[i].position[0] == c.boundary[i].position[0]);
    CHECK(placed.boundary[i].position[1] == c.boundary[i].position[1]);
    CHECK(placed.boundary[i].position[2] == 0.0);
  }
}

TEST_CASE("place_oriented: exact collisions error, near collisions merge") {
  const ConstraintSet c = circle_constraints(0.0, 0.0, 0.4, 8, 0.02);
  OrientedSlice s1, s2;
  s1.constraints = c;
  s2.constraints = c;  // identical frame: every constraint collides exactly
  CHECK_THROWS_AS(place_oriented({s1, s2}), DuplicateCenterError);

  // Shift the second slice by less than the merge tolerance.
  OrientedSlice s3 = s2;
  s3.frame.origin = Point{1e-8, 0.0, 0.0};
  PlacementReport report;
  const ConstraintSet merged = place_oriented({s1, s3}, &report);
  CHECK(report.merged == c.size());
  CHECK(merged.size() == c.size());
}

TEST_CASE("perpendicular great circles reconstruct a sphere") {
  const double radius = 0.5;
  const int count = 48;
  // Circle in the xy plane (identity frame) and in the xz plane; the
  // meridian sampling is phase-shifted so the circles' two intersection
  // points do not produce coincident constraints.
  OrientedSlice equator;
  equator.constraints = circle_constraints(0.0, 0.0, radius, count, 0.01);

  OrientedSlice meridian;
  meridian.constraints = circle_constraints(0.0, 0.0, radius, count, 0.01, M_PI / count);
  meridian.frame.axis_u = {1.0, 0.0, 0.0};
  meridian.frame.axis_v = {0.0, 0.0, 1.0};

  PlacementReport report;
  const ConstraintSet combined = place_oriented({equator, meridian}, &report);
  CHECK(report.merged == 0);

  const ReconstructResult result = reconstruct(combined, Kernel::cubic, 45, radius);

  TestRng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // Random direction; bisect f along the ray for the zero crossing.
    double dx = rng.uniform(-1.0, 1.0), dy = rng.uniform(-1.0, 1.0),
           dz = rng.uniform(-1.0, 1.0);
    const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (len < 0.1) continue;
    dx /= len;
    dy /= len;
    dz /= len;
    double lo = 0.0, hi = 2.0 * radius;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (result.model.evaluate({mid * dx, mid * dy, mid * dz}) > 0.0 ? lo : hi) = mid;
    }
    worst = std::max(worst, std::abs(0.5 * (lo + hi) - radius));
  }
  CHECK(worst <= 0.02 * radius);
}

TEST_CASE("reconstruct: translation equivariance of the mesh") {
  const ConstraintSet c = circle_constraints(0.0, 0.0, 0.4, 16, 0.02);
  const ConstraintSet base = stack_parallel({c, c}, {0.3});

  ConstraintSet moved = base;
  for (auto* list : {&moved.boundary, &moved.normal})
    for (auto& cst : *list) {
      cst.position[0] += 2.0;
      cst.position[1] -= 1.0;
      cst.position[2] += 0.5;
    }

  const ReconstructResult r1 = reconstruct(base, Kernel::cubic, 17, 0.3);
  const ReconstructResult r2 = reconstruct(moved, Kernel::cubic, 17, 0.3);
  REQUIRE(r1.mesh.vertices.size() == r2.mesh.vertices.size());
  const double cell = r1.extraction_bounds.extent(0) / 16.0;
  for (std::size_t i = 0; i < r1.mesh.vertices.size(); ++i) {
    CHECK(std::abs(r1.mesh.vertices[i][0] + 2.0 - r2.mesh.vertices[i][0]) <= 0.1 * cell);
    CHECK(std::abs(r1.mesh.vertices[i][1] - 1.0 - r2.mesh.vertices[i][1]) <= 0.1 * cell);
    CHECK(std::abs(r1.mesh.vertices[i][2] + 0.5 - r2.mesh.vertices[i][2]) <= 0.1 * cell);
  }
}
