#pragma once

#include <span>

#include <Eigen/Dense>

namespace egoexo::geom {

/// Planar projective map, dst ~ h * src in homogeneous coordinates.
/// Normalized so h(2,2) = 1 whenever h(2,2) != 0.
struct Homography {
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
  Homography inverse() const;
  Homography operator*(const Homography& rhs) const;

  static Homography normalized(const Eigen::Matrix3d& m);
};

/// Normalized direct linear transform over >= 4 correspondences.
///
/// Throws ValidationError when the lists differ in length or hold fewer than
/// 4 points, and DegenerateInputError when the configuration does not pin
/// down a unique non-singular homography (e.g. collinear points).
Homography estimate_homography(std::span<const Eigen::Vector2d> src,
                               std::span<const Eigen::Vector2d> dst);

}  // namespace egoexo::geom
