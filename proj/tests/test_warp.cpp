#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "vshape/measure.hpp"
#include "vshape/warp.hpp"

using namespace vshape;
using vshape::testing::circle_constraints;
using vshape::testing::disk_image;
using vshape::testing::TestRng;

namespace {

CorrespondenceSet square_corners(double rot_quarter_turns) {
  // Unit square corners and their images under rotation about the center.
  CorrespondenceSet corr;
  const double cx = 0.5, cy = 0.5;
  const double ang = rot_quarter_turns * M_PI / 2.0;
  const double c = std::cos(ang), s = std::sin(ang);
  for (const auto& p : {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}, Point{0.0, 1.0}}) {
    corr.a_points.push_back(p);
    corr.b_points.push_back(
        {cx + c * (p[0] - cx) - s * (p[1] - cy), cy + s * (p[0] - cx) + c * (p[1] - cy)});
  }
  return corr;
}

}  // namespace

TEST_CASE("warps: identity correspondences give zero displacement") {
  CorrespondenceSet corr;
  TestRng rng(3);
  for (int i = 0; i < 6; ++i) {
    const Point p = rng.point(2, 0.0, 1.0);
    corr.a_points.push_back(p);
    corr.b_points.push_back(p);
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  for (int i = 0; i < 20; ++i) {
    const Point p = rng.point(2, -0.5, 1.5);
    const Point d = wa.displacement(p);
    CHECK(std::abs(d[0]) <= 1e-9);
    CHECK(std::abs(d[1]) <= 1e-9);
    CHECK(distance(wb.apply(p), p) <= 1e-9);
  }
}

TEST_CASE("warps: pure translation reproduces the constant half field") {
  CorrespondenceSet corr;
  TestRng rng(5);
  const double vx = 0.31, vy = -0.17;
  for (int i = 0; i < 8; ++i) {
    const Point p = rng.point(2, 0.0, 1.0);
    corr.a_points.push_back(p);
    corr.b_points.push_back({p[0] + vx, p[1] + vy});
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  for (int i = 0; i < 100; ++i) {
    const Point p = rng.point(2, -1.0, 2.0);
    const Point da = wa.displacement(p);
    CHECK(da[0] == doctest::Approx(vx / 2).epsilon(1e-8));
    CHECK(da[1] == doctest::Approx(vy / 2).epsilon(1e-8));
    const Point db = wb.displacement(p);
    CHECK(db[0] == doctest::Approx(-vx / 2).epsilon(1e-8));
    CHECK(db[1] == doctest::Approx(-vy / 2).epsilon(1e-8));
  }
}

TEST_CASE("warps: affine correspondences are reproduced exactly") {
  // b = M a + v with degree-1 representable displacement.
  CorrespondenceSet corr;
  TestRng rng(7);
  const double m00 = 1.2, m01 = -0.3, m10 = 0.4, m11 = 0.9, vx = 0.05, vy = -0.1;
  for (int i = 0; i < 10; ++i) {
    const Point p = rng.point(2, 0.0, 1.0);
    corr.a_points.push_back(p);
    corr.b_points.push_back(
        {m00 * p[0] + m01 * p[1] + vx, m10 * p[0] + m11 * p[1] + vy});
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  for (int i = 0; i < 100; ++i) {
    const Point p = rng.point(2, -0.5, 1.5);
    const Point d = wa.displacement(p);
    const double ex = 0.5 * ((m00 - 1.0) * p[0] + m01 * p[1] + vx);
    const double ey = 0.5 * (m10 * p[0] + (m11 - 1.0) * p[1] + vy);
    CHECK(d[0] == doctest::Approx(ex).epsilon(1e-7));
    CHECK(d[1] == doctest::Approx(ey).epsilon(1e-7));
  }
}

TEST_CASE("warps: quarter-turn square correspondence fixes the center") {
  const CorrespondenceSet corr = square_corners(1.0);
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  for (std::size_t i = 0; i < corr.a_points.size(); ++i) {
    const Point d = wa.displacement(corr.a_points[i]);
    for (int ax = 0; ax < 2; ++ax)
      CHECK(d[ax] ==
            doctest::Approx(0.5 * (corr.b_points[i][ax] - corr.a_points[i][ax])).epsilon(1e-6));
  }
  // The rotation center is a fixed point of the interpolated field.
  const Point center_moved = wa.apply({0.5, 0.5});
  CHECK(center_moved[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(center_moved[1] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("warps: 3D translation correspondences") {
  CorrespondenceSet corr;
  TestRng rng(9);
  const double v[3] = {0.2, -0.4, 0.12};
  for (int i = 0; i < 8; ++i) {
    const Point p = rng.point(3, 0.0, 1.0);
    corr.a_points.push_back(p);
    corr.b_points.push_back({p[0] + v[0], p[1] + v[1], p[2] + v[2]});
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::cubic);
  for (int i = 0; i < 50; ++i) {
    const Point p = rng.point(3, -0.5, 1.5);
    const Point d = wa.displacement(p);
    for (int ax = 0; ax < 3; ++ax) CHECK(d[ax] == doctest::Approx(v[ax] / 2).epsilon(1e-8));
  }
}

TEST_CASE("apply_warp maps points through the displacement field") {
  CorrespondenceSet corr;
  TestRng rng(11);
  for (int i = 0; i < 6; ++i) {
    const Point p = rng.point(2, 0.0, 1.0);
    corr.a_points.push_back(p);
    corr.b_points.push_back({p[0] + 0.1, p[1]});
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  const std::vector<Point> pts = {corr.a_points[0], corr.a_points[1]};
  const auto moved = apply_warp(wa, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(moved[i][0] == doctest::Approx(pts[i][0] + 0.05).epsilon(1e-8));
    CHECK(moved[i][1] == doctest::Approx(pts[i][1]).epsilon(1e-8));
  }
  // a_i maps to the midpoint (a_i + b_i) / 2.
  for (std::size_t i = 0; i < corr.a_points.size(); ++i) {
    const Point mid = wa.apply(corr.a_points[i]);
    for (int ax = 0; ax < 2; ++ax)
      CHECK(mid[ax] ==
            doctest::Approx(0.5 * (corr.a_points[i][ax] + corr.b_points[i][ax])).epsilon(1e-7));
  }
}

TEST_CASE("unwarp: endpoints and midpoint of the schedule") {
  const CorrespondenceSet corr = square_corners(0.5);
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  TestRng rng(13);

  for (double t_max : {2.0, 1.0, 5.0}) {
    for (int i = 0; i < 100; ++i) {
      const Point p = rng.point(2, 0.0, 1.0);
      // Mid-sequence: tau = 1, no warp at all, exactly.
      const Point mid = unwarp({p[0], p[1], 0.5 * t_max}, wa, wb, t_max);
      CHECK(mid[0] == p[0]);
      CHECK(mid[1] == p[1]);

      // tau = 0 adds the full w_A displacement.
      const Point start = unwarp({p[0], p[1], 0.0}, wa, wb, t_max);
      const Point da = wa.displacement(p);
      CHECK(start[0] == doctest::Approx(p[0] + da[0]).epsilon(1e-12));
      CHECK(start[1] == doctest::Approx(p[1] + da[1]).epsilon(1e-12));

      // tau = 2 adds the full w_B displacement.
      const Point end = unwarp({p[0], p[1], t_max}, wa, wb, t_max);
      const Point db = wb.displacement(p);
      CHECK(end[0] == doctest::Approx(p[0] + db[0]).epsilon(1e-12));
      CHECK(end[1] == doctest::Approx(p[1] + db[1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("warp_constraint_set keeps pairing distances") {
  const ConstraintSet set = circle_constraints(0.5, 0.5, 0.3, 16, 0.02);
  CorrespondenceSet corr;
  for (int i = 0; i < 8; ++i) {
    const double ang = 2.0 * M_PI * i / 8;
    corr.a_points.push_back({0.5 + 0.3 * std::cos(ang), 0.5 + 0.3 * std::sin(ang)});
    corr.b_points.push_back({0.55 + 0.35 * std::cos(ang), 0.5 + 0.25 * std::sin(ang)});
  }
  const auto [wa, wb] = build_halfway_warps(corr, Kernel::thin_plate);
  const ConstraintSet warped = warp_constraint_set(wa, set);
  REQUIRE(warped.boundary.size() == set.boundary.size());
  REQUIRE(warped.normal.size() == set.normal.size());
  for (std::size_t bi = 0; bi < warped.boundary.size(); ++bi) {
    const int ni = warped.normal_of[bi];
    const double before = distance(set.boundary[bi].position, set.normal[ni].position);
    const double after = distance(warped.boundary[bi].position, warped.normal[ni].position);
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("warped_morph: identity correspondences reproduce the plain morph") {
  const GrayImage disk_a = disk_image(64, 26.0, 31.5, 13.0);
  const GrayImage disk_b = disk_image(64, 38.0, 31.5, 13.0);
  ImageConstraintOptions opt;
  opt.stride = 2;
  const ConstraintSet a = image_to_constraints(disk_a, 127.5, opt);
  const ConstraintSet b = image_to_constraints(disk_b, 127.5, opt);

  CorrespondenceSet corr;
  for (int i = 0; i < 8; ++i) {
    const double ang = 2.0 * M_PI * i / 8;
    const Point p{31.5 + 20.0 * std::cos(ang), 31.5 + 20.0 * std::sin(ang)};
    corr.a_points.push_back(p);
    corr.b_points.push_back(p);
  }

  const double t_max = 25.0;
  const FrameGrid grid = default_frame_grid(a, b, 129);
  const auto plain = morph_sequence(build_morph(a, b, t_max, Kernel::cubic), 6, grid);
  const auto warped = warped_morph(a, b, corr, t_max, Kernel::cubic, 6, grid);
  REQUIRE(plain.size() == warped.size());
  for (std::size_t f = 0; f < plain.size(); ++f)
    CHECK(hausdorff_distance(plain[f], warped[f]) <= 1e-9);
}

TEST_CASE("warped_morph: translation correspondence centers the middle frame") {
  const GrayImage disk_a = disk_image(64, 24.0, 31.5, 12.0);
  const GrayImage disk_b = disk_image(64, 40.0, 31.5, 12.0);
  ImageConstraintOptions opt;
  opt.stride = 2;
  const ConstraintSet a = image_to_constraints(disk_a, 127.5, opt);
  const ConstraintSet b = image_to_constraints(disk_b, 127.5, opt);

  CorrespondenceSet corr;
  for (int i = 0; i < 12; ++i) {
    const double ang = 2.0 * M_PI * i / 12;
    corr.a_points.push_back({24.0 + 12.0 * std::cos(ang), 31.5 + 12.0 * std::sin(ang)});
    corr.b_points.push_back({40.0 + 12.0 * std::cos(ang), 31.5 + 12.0 * std::sin(ang)});
  }

  const FrameGrid grid = default_frame_grid(a, b, 129);
  const auto frames = warped_morph(a, b, corr, 25.0, Kernel::cubic, 5, grid);
  REQUIRE(frames.size() == 5);

  // Middle frame (tau = 1): centroid at the midpoint of the two centers.
  const auto& mid = frames[2];
  REQUIRE(!mid.empty());
  double cx = 0.0, cy = 0.0;
  std::size_t n = 0;
  for (const auto& loop : mid.loops)
    for (const auto& p : loop.points) {
      cx += p[0];
      cy += p[1];
      ++n;
    }
  cx /= n;
  cy /= n;
  CHECK(std::abs(cx - 32.0) <= 1.0);
  CHECK(std::abs(cy - 31.5) <= 1.0);
}

TEST_CASE("warped and unwarped endpoint contours agree after unwarp") {
  const GrayImage xi = vshape::testing::x_image(64);
  const GrayImage oi = vshape::testing::ring_image(64, 31.5, 31.5, 12.0, 22.0);
  ImageConstraintOptions opt;
  opt.stride = 2;
  const ConstraintSet a = image_to_constraints(xi, 127.5, opt);
  const ConstraintSet b = image_to_constraints(oi, 127.5, opt);

  // Correspondences nudge four anchor points toward the ring.
  CorrespondenceSet corr;
  for (int i = 0; i < 8; ++i) {
    const double ang = 2.0 * M_PI * i / 8;
    corr.a_points.push_back({31.5 + 24.0 * std::cos(ang), 31.5 + 24.0 * std::sin(ang)});
    corr.b_points.push_back({31.5 + 19.0 * std::cos(ang), 31.5 + 19.0 * std::sin(ang)});
  }

  const double t_max = 25.0;
  const FrameGrid grid = default_frame_grid(a, b, 129);
  const auto plain = morph_sequence(build_morph(a, b, t_max, Kernel::cubic), 8, grid);
  const auto warped = warped_morph(a, b, corr, t_max, Kernel::cubic, 8, grid);

  CHECK(hausdorff_distance(plain.front(), warped.front()) <= 1.0);
  CHECK(hausdorff_distance(plain.back(), warped.back()) <= 1.0);
}

TEST_CASE("correspondence validation") {
  CorrespondenceSet corr;
  corr.a_points = {Point{0.0, 0.0}, Point{1.0, 0.0}};
  corr.b_points = {Point{0.0, 0.0}};
  CHECK_THROWS_AS(corr.validate(), Error);

  corr.b_points = corr.a_points;
  CHECK_THROWS_AS(corr.validate(), InsufficientConstraintsError);  // < dim+1
}
