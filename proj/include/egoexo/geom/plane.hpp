#pragma once

#include <span>

#include <Eigen/Dense>

namespace egoexo::geom {

/// normal . x = offset, with |normal| = 1.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;

  double signed_distance(const Eigen::Vector3d& x) const { return normal.dot(x) - offset; }
  Eigen::Vector3d project(const Eigen::Vector3d& x) const {
    return x - signed_distance(x) * normal;
  }
};

struct PlaneFit {
  Plane plane;
  double rms_residual = 0.0;
};

/// Total least-squares plane: centroid plus the direction of least variance.
///
/// The normal is oriented so that offset >= 0; for planes through the origin
/// the largest-magnitude normal component is made positive. Throws
/// DegenerateInputError for fewer than 3 points or a collinear set.
PlaneFit fit_plane(std::span<const Eigen::Vector3d> points);

}  // namespace egoexo::geom
