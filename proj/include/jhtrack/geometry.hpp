#pragma once

#include <Eigen/Dense>

#include "jhtrack/errors.hpp"

namespace jhtrack {

using ImagePoint = Eigen::Vector2d;
using GroundPoint = Eigen::Vector2d;

// Axis-aligned box in image coordinates, stored as (left, top, right, bottom).
struct BBox {
  double l = 0.0;
  double t = 0.0;
  double r = 0.0;
  double b = 0.0;

  double width() const { return r - l; }
  double height() const { return b - t; }
  double area() const { return width() * height(); }

  static BBox from_ltwh(double left, double top, double w, double h) {
    return BBox{left, top, left + w, top + h};
  }
};

// Plane-to-image homography, normalized so that the (2,2) entry is one.
struct Homography {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

  Homography() = default;
  // Normalizes the bottom-right entry to one; throws SingularHomography if
  // that entry is smaller than 1e-12 in magnitude.
  explicit Homography(const Eigen::Matrix3d& raw);
};

// Inter-frame camera motion as a 2x3 affine map on image coordinates.
struct AffineMotion {
  Eigen::Matrix<double, 2, 3> a = (Eigen::Matrix<double, 2, 3>() << 1, 0, 0,
                                   0, 1, 0)
                                      .finished();

  // Affine map embedded as a 3x3 matrix with last row (0, 0, 1).
  Eigen::Matrix3d embed() const;
  // Linear part of the map (no translation).
  Eigen::Matrix2d linear() const;

  bool is_identity(double tol = 0.0) const;
};

// Projects a ground-plane point into the image. Throws DegenerateProjection
// if the homogeneous scale falls below 1e-12 in magnitude.
ImagePoint project(const Homography& h, const GroundPoint& g);

// Maps an image point back to the ground plane through the inverse
// homography. Throws SingularHomography if the homography is not invertible.
GroundPoint unproject(const Homography& h, const ImagePoint& p);

// 2x2 Jacobian of the projected image point with respect to the ground
// coordinates, evaluated at g.
Eigen::Matrix2d jacobian_ground(const Homography& h, const GroundPoint& g);

// 2x9 Jacobian of the projected image point with respect to the homography
// entries, columns ordered (h1, h4, h7, h2, h5, h8, h3, h6, h9), i.e. the
// column-stacked matrix. The h9 column is identically zero because the
// homography is kept normalized to h9 = 1.
Eigen::Matrix<double, 2, 9> jacobian_homography(const Homography& h,
                                                const GroundPoint& g);

// Composes camera motion with a homography: normalize(embed(a) * h).
Homography apply_affine(const AffineMotion& a, const Homography& h);

// Propagates a box width/height through the linear part of the camera
// motion: (w', h') = R * (w, h).
Eigen::Vector2d apply_affine_wh(const AffineMotion& a, double w, double h);

// Bottom-centre image point of a box: ((l + r) / 2, b).
ImagePoint bottom_centre(const BBox& box);

}  // namespace jhtrack
