#include "egoexo/geom/pose.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "egoexo/errors.hpp"

namespace egoexo::geom {

namespace {
constexpr double kOrthoTol = 1e-9;
}

Pose Pose::from_quaternion(const Eigen::Vector3d& t, const Eigen::Quaterniond& q,
                           double timestamp) {
  Pose p;
  p.rotation = q.normalized().toRotationMatrix();
  p.translation = t;
  p.timestamp = timestamp;
  return p;
}

Eigen::Quaterniond Pose::quaternion() const {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  // Canonical hemisphere keeps serialized poses stable.
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  inv.timestamp = timestamp;
  return inv;
}

bool Pose::is_valid() const noexcept {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  if (!std::isfinite(timestamp) || timestamp < 0.0) return false;
  const Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > kOrthoTol) return false;
  return std::abs(rotation.determinant() - 1.0) <= kOrthoTol;
}

void Pose::validate() const {
  if (!rotation.allFinite() || !translation.allFinite())
    throw ValidationError("pose has non-finite entries");
  if (!std::isfinite(timestamp) || timestamp < 0.0)
    throw ValidationError("pose timestamp must be finite and non-negative");
  const Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > kOrthoTol)
    throw ValidationError("pose rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > kOrthoTol)
    throw ValidationError("pose rotation has det != 1");
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  out.timestamp = a.timestamp;
  return out;
}

Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
             const Eigen::Vector3d& up) {
  const Eigen::Vector3d forward = target - eye;
  if (forward.norm() == 0.0) throw ValidationError("look_at: eye equals target");
  const Eigen::Vector3d z = forward.normalized();
  // Image y points down, so it is opposite to the projected up vector.
  const Eigen::Vector3d x_raw = z.cross(up);
  if (x_raw.norm() < 1e-12) throw ValidationError("look_at: view direction parallel to up");
  const Eigen::Vector3d x = x_raw.normalized();
  const Eigen::Vector3d y = z.cross(x);
  Pose p;
  p.rotation.col(0) = x;
  p.rotation.col(1) = y;
  p.rotation.col(2) = z;
  p.translation = eye;
  return p;
}

Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    out = u * svd.matrixV().transpose();
  }
  return out;
}

}  // namespace egoexo::geom
