#include "jhtrack/geometry.hpp"

#include <cmath>

namespace jhtrack {

namespace {
constexpr double kScaleTol = 1e-12;
}

Homography::Homography(const Eigen::Matrix3d& raw) {
  const double h9 = raw(2, 2);
  if (std::abs(h9) < kScaleTol) {
    throw SingularHomography("homography scale entry is numerically zero");
  }
  m = raw / h9;
  m(2, 2) = 1.0;
}

Eigen::Matrix3d AffineMotion::embed() const {
  Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
  e.topRows<2>() = a;
  return e;
}

Eigen::Matrix2d AffineMotion::linear() const { return a.leftCols<2>(); }

bool AffineMotion::is_identity(double tol) const {
  Eigen::Matrix<double, 2, 3> id;
  id << 1, 0, 0, 0, 1, 0;
  return ((a - id).cwiseAbs().maxCoeff() <= tol);
}

ImagePoint project(const Homography& h, const GroundPoint& g) {
  const Eigen::Vector3d b = h.m * Eigen::Vector3d(g.x(), g.y(), 1.0);
  if (std::abs(b.z()) < kScaleTol) {
    throw DegenerateProjection("ground point projects to infinity");
  }
  return ImagePoint(b.x() / b.z(), b.y() / b.z());
}

GroundPoint unproject(const Homography& h, const ImagePoint& p) {
  if (std::abs(h.m.determinant()) < kScaleTol) {
    throw SingularHomography("homography is not invertible");
  }
  const Eigen::Vector3d b = h.m.inverse() * Eigen::Vector3d(p.x(), p.y(), 1.0);
  if (std::abs(b.z()) < kScaleTol) {
    throw DegenerateProjection("image point maps to the plane at infinity");
  }
  return GroundPoint(b.x() / b.z(), b.y() / b.z());
}

Eigen::Matrix2d jacobian_ground(const Homography& h, const GroundPoint& g) {
  const Eigen::Matrix3d& m = h.m;
  const Eigen::Vector3d b = m * Eigen::Vector3d(g.x(), g.y(), 1.0);
  if (std::abs(b.z()) < kScaleTol) {
    throw DegenerateProjection("ground point projects to infinity");
  }
  const double gamma = 1.0 / b.z();
  const double xi = b.x() * gamma;
  const double yi = b.y() * gamma;
  Eigen::Matrix2d j;
  j << m(0, 0) - m(2, 0) * xi, m(0, 1) - m(2, 1) * xi,
      m(1, 0) - m(2, 0) * yi, m(1, 1) - m(2, 1) * yi;
  return gamma * j;
}

Eigen::Matrix<double, 2, 9> jacobian_homography(const Homography& h,
                                                const GroundPoint& g) {
  const Eigen::Vector3d b = h.m * Eigen::Vector3d(g.x(), g.y(), 1.0);
  if (std::abs(b.z()) < kScaleTol) {
    throw DegenerateProjection("ground point projects to infinity");
  }
  const double gamma = 1.0 / b.z();
  const double xi = b.x() * gamma;
  const double yi = b.y() * gamma;
  const double xw = g.x();
  const double yw = g.y();
  Eigen::Matrix<double, 2, 9> j;
  // Columns follow the column-stacked homography (h1, h4, h7, h2, h5, h8,
  // h3, h6, h9); the h9 column is zero by the normalization convention.
  j << xw, 0, -xi * xw, yw, 0, -xi * yw, 1, 0, 0,
      0, xw, -yi * xw, 0, yw, -yi * yw, 0, 1, 0;
  return gamma * j;
}

Homography apply_affine(const AffineMotion& a, const Homography& h) {
  return Homography(a.embed() * h.m);
}

Eigen::Vector2d apply_affine_wh(const AffineMotion& a, double w, double h) {
  return a.linear() * Eigen::Vector2d(w, h);
}

ImagePoint bottom_centre(const BBox& box) {
  return ImagePoint(0.5 * (box.l + box.r), box.b);
}

}  // namespace jhtrack
