#include <cmath>

#include "doctest.h"
#include "jhtrack/geometry.hpp"

using namespace jhtrack;

namespace {

Eigen::Matrix3d scene_matrix() {
  Eigen::Matrix3d m;
  m << 50.0, 0.0, 640.0, 0.0, 25.0, 120.0, 0.0, 0.002, 1.0;
  return m;
}

// Central finite difference of the projection with respect to one raw
// homography / ground coordinate.
ImagePoint project_raw(const Eigen::Matrix3d& m, const GroundPoint& g) {
  Homography h;
  h.m = m;
  return project(h, g);
}

}  // namespace

TEST_CASE("box accessors") {
  const BBox box = BBox::from_ltwh(10.0, 20.0, 30.0, 40.0);
  CHECK(box.l == 10.0);
  CHECK(box.t == 20.0);
  CHECK(box.r == 40.0);
  CHECK(box.b == 60.0);
  CHECK(box.width() == 30.0);
  CHECK(box.height() == 40.0);
  CHECK(box.area() == 1200.0);
}

TEST_CASE("bottom centre of a box") {
  const ImagePoint p = bottom_centre(BBox::from_ltwh(0.0, 0.0, 10.0, 20.0));
  CHECK(p.x() == 5.0);
  CHECK(p.y() == 20.0);
}

TEST_CASE("homography constructor normalizes the last entry") {
  Eigen::Matrix3d raw = scene_matrix() * 2.0;
  const Homography h(raw);
  CHECK(h.m(2, 2) == 1.0);
  CHECK(h.m(0, 0) == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(h.m(1, 2) == doctest::Approx(120.0).epsilon(1e-14));

  raw(2, 2) = 0.0;
  CHECK_THROWS_AS(Homography{raw}, SingularHomography);
}

TEST_CASE("projection closed form") {
  const Homography h(scene_matrix());
  const GroundPoint g(2.0, 10.0);
  const ImagePoint p = project(h, g);
  // u = (50*2 + 640) / (0.002*10 + 1), v = (25*10 + 120) / 1.02.
  CHECK(p.x() == doctest::Approx(740.0 / 1.02).epsilon(1e-14));
  CHECK(p.y() == doctest::Approx(370.0 / 1.02).epsilon(1e-14));
}

TEST_CASE("projection throws on a vanishing homogeneous scale") {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(2, 0) = -1.0;
  const Homography h(m);
  CHECK_THROWS_AS(project(h, GroundPoint(1.0, 0.0)), DegenerateProjection);
}

TEST_CASE("unproject inverts project") {
  const Homography h(scene_matrix());
  const GroundPoint g(-3.5, 7.25);
  const GroundPoint back = unproject(h, project(h, g));
  CHECK(back.x() == doctest::Approx(g.x()).epsilon(1e-12));
  CHECK(back.y() == doctest::Approx(g.y()).epsilon(1e-12));

  Eigen::Matrix3d singular;
  singular << 1, 0, 0, 2, 0, 0, 0, 0, 1;  // rank 2
  CHECK_THROWS_AS(unproject(Homography{singular}, ImagePoint(1.0, 1.0)),
                  SingularHomography);
}

TEST_CASE("ground jacobian at the identity homography") {
  const Eigen::Matrix2d j = jacobian_ground(Homography{}, GroundPoint(3.0, 4.0));
  CHECK(j.isApprox(Eigen::Matrix2d::Identity(), 1e-14));
}

TEST_CASE("ground jacobian matches finite differences") {
  const Homography h(scene_matrix());
  const double eps = 1e-6;
  for (const GroundPoint& g :
       {GroundPoint(2.0, 10.0), GroundPoint(-6.0, 3.0), GroundPoint(0.5, 18.0)}) {
    const Eigen::Matrix2d j = jacobian_ground(h, g);
    for (int c = 0; c < 2; ++c) {
      GroundPoint lo = g, hi = g;
      lo[c] -= eps;
      hi[c] += eps;
      const ImagePoint d = (project(h, hi) - project(h, lo)) / (2.0 * eps);
      CHECK(j(0, c) == doctest::Approx(d.x()).epsilon(1e-6));
      CHECK(j(1, c) == doctest::Approx(d.y()).epsilon(1e-6));
    }
  }
}

TEST_CASE("homography jacobian closed form at the identity") {
  const Eigen::Matrix<double, 2, 9> j =
      jacobian_homography(Homography{}, GroundPoint(1.0, 0.0));
  Eigen::Matrix<double, 2, 9> expected;
  expected << 1, 0, -1, 0, 0, 0, 1, 0, 0,  //
      0, 1, 0, 0, 0, 0, 0, 1, 0;
  CHECK(j.isApprox(expected, 1e-14));
}

TEST_CASE("homography jacobian matches finite differences") {
  const Homography h(scene_matrix());
  const GroundPoint g(2.0, 10.0);
  const Eigen::Matrix<double, 2, 9> j = jacobian_homography(h, g);
  const double eps = 1e-7;
  // Column-stacked entry order; the h9 column is pinned to zero.
  const int rows[9] = {0, 1, 2, 0, 1, 2, 0, 1, 2};
  const int cols[9] = {0, 0, 0, 1, 1, 1, 2, 2, 2};
  for (int k = 0; k < 8; ++k) {
    Eigen::Matrix3d lo = h.m, hi = h.m;
    lo(rows[k], cols[k]) -= eps;
    hi(rows[k], cols[k]) += eps;
    const ImagePoint d = (project_raw(hi, g) - project_raw(lo, g)) / (2.0 * eps);
    CHECK(j(0, k) == doctest::Approx(d.x()).epsilon(1e-6));
    CHECK(j(1, k) == doctest::Approx(d.y()).epsilon(1e-6));
  }
  CHECK(j(0, 8) == 0.0);
  CHECK(j(1, 8) == 0.0);
}

TEST_CASE("affine embedding and identity check") {
  AffineMotion a;
  CHECK(a.is_identity());
  a.a << 1, 0, 3, 0, 1, -2;
  CHECK_FALSE(a.is_identity());
  const Eigen::Matrix3d e = a.embed();
  CHECK(e(0, 2) == 3.0);
  CHECK(e(1, 2) == -2.0);
  CHECK(e(2, 0) == 0.0);
  CHECK(e(2, 1) == 0.0);
  CHECK(e(2, 2) == 1.0);
  CHECK(a.linear() == Eigen::Matrix2d::Identity());
}

TEST_CASE("affine composition with a homography") {
  AffineMotion a;
  a.a << 1, 0, 3, 0, 1, 0;
  const Homography h = apply_affine(a, Homography{});
  Eigen::Matrix3d expected = Eigen::Matrix3d::Identity();
  expected(0, 2) = 3.0;
  CHECK(h.m.isApprox(expected, 1e-14));

  // Composition shifts every projection by the translation.
  const Homography hs(scene_matrix());
  const Homography moved = apply_affine(a, hs);
  const GroundPoint g(1.0, 6.0);
  const ImagePoint p0 = project(hs, g);
  const ImagePoint p1 = project(moved, g);
  CHECK(p1.x() == doctest::Approx(p0.x() + 3.0).epsilon(1e-12));
  CHECK(p1.y() == doctest::Approx(p0.y()).epsilon(1e-12));
}

TEST_CASE("box size propagation through the linear part") {
  AffineMotion a;
  a.a << 2, 0, 5, 0, 3, 7;
  const Eigen::Vector2d wh = apply_affine_wh(a, 4.0, 5.0);
  CHECK(wh.x() == 8.0);
  CHECK(wh.y() == 15.0);
}
