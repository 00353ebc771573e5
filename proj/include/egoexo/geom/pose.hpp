#pragma once

#include <Eigen/Dense>

namespace egoexo::geom {

/// Camera-to-world rigid transform: X_world = rotation * X_cam + translation.
///
/// Every loader converts into this convention at ingest. The camera frame is
/// x right, y down, z along the optical axis.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double timestamp = 0.0;

  static Pose from_quaternion(const Eigen::Vector3d& t, const Eigen::Quaterniond& q,
                              double timestamp = 0.0);

  Eigen::Quaterniond quaternion() const;

  Eigen::Vector3d to_world(const Eigen::Vector3d& p_cam) const {
    return rotation * p_cam + translation;
  }
  Eigen::Vector3d to_camera(const Eigen::Vector3d& p_world) const {
    return rotation.transpose() * (p_world - translation);
  }

  /// World-to-camera transform packaged as a Pose; keeps the timestamp.
  Pose inverse() const;

  /// Throws ValidationError unless rotation is orthonormal with det 1
  /// (1e-9 per entry) and the timestamp is finite and non-negative.
  void validate() const;
  bool is_valid() const noexcept;
};

/// this ∘ other, i.e. applies `other` first. Timestamp taken from `a`.
Pose compose(const Pose& a, const Pose& b);

/// Camera at `eye` looking at `target`, with image-up as close to `up` as
/// possible. Throws ValidationError when the view direction is parallel to up.
Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
             const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ());

/// Rotation about a unit axis by `angle` radians.
Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle);

/// Re-orthonormalize a rotation that drifted through repeated products.
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r);

}  // namespace egoexo::geom
