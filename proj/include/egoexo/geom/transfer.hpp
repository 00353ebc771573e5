#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/point_set.hpp"
#include "egoexo/geom/pose.hpp"

namespace egoexo::geom {

/// How a cloud expressed in the current camera frame is carried into the
/// reference camera frame.
///
///  - standard:      R_r^T * (R_c * p + t_c - t_r)
///  - paper_literal: (R_r^T * R_c) * p + (t_c - t_r)
///
/// The two agree whenever R_r = I. Only `standard` is a rigid-body change of
/// frame; `paper_literal` leaves the translation difference in world axes.
enum class TransferMode { standard, paper_literal };

/// Points with depth at or below this are culled by project_points.
inline constexpr double kEpsilonDepth = 1e-6;

/// Affine map p -> rotation * p + offset.
struct RigidMap {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + offset; }
};

/// The current -> reference map used by transfer_points. Validates both poses.
RigidMap relative_transfer(const Pose& current, const Pose& reference, TransferMode mode);

/// Carries `cloud` from the current camera frame into the reference camera
/// frame. Colors pass through unchanged.
Point3Set transfer_points(const Point3Set& cloud, const Pose& current, const Pose& reference,
                          TransferMode mode = TransferMode::standard);

/// Pinhole projection [u v 1]^T ~ lambda1 * K * p.
///
/// lambda1 scales the homogeneous vector before the perspective division, so
/// it cancels in (u, v); it is kept so the contract matches the projection
/// model term for term. Points with z <= kEpsilonDepth are dropped; the
/// survivors keep their source index and depth, in source order.
std::vector<PixelPoint> project_points(std::span<const Eigen::Vector3d> points,
                                       const CameraIntrinsics& intrinsics, double lambda1 = 1.0);

inline std::vector<PixelPoint> project_points(const Point3Set& cloud,
                                              const CameraIntrinsics& intrinsics,
                                              double lambda1 = 1.0) {
  return project_points(std::span<const Eigen::Vector3d>(cloud.points), intrinsics, lambda1);
}

/// Places a model cloud into the map at a camera pose:
/// lambda2 * R * p + t. Colors pass through.
Point3Set place_in_map(const Point3Set& cloud, const Pose& pose, double lambda2);

}  // namespace egoexo::geom
