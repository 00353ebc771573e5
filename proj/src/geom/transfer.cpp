#include "egoexo/geom/transfer.hpp"

#include "egoexo/errors.hpp"

namespace egoexo::geom {

RigidMap relative_transfer(const Pose& current, const Pose& reference, TransferMode mode) {
  current.validate();
  reference.validate();
  const Eigen::Matrix3d ref_inv = reference.rotation.transpose();
  const Eigen::Vector3d dt = current.translation - reference.translation;
  RigidMap m;
  m.rotation = ref_inv * current.rotation;
  m.offset = mode == TransferMode::standard ? Eigen::Vector3d(ref_inv * dt) : dt;
  return m;
}

Point3Set transfer_points(const Point3Set& cloud, const Pose& current, const Pose& reference,
                          TransferMode mode) {
  const RigidMap m = relative_transfer(current, reference, mode);
  Point3Set out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(m.apply(p));
  out.colors = cloud.colors;
  return out;
}

std::vector<PixelPoint> project_points(std::span<const Eigen::Vector3d> points,
                                       const CameraIntrinsics& k, double lambda1) {
  if (!(lambda1 > 0.0)) throw ValidationError("lambda1 must be positive");
  std::vector<PixelPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d& p = points[i];
    if (!(p.z() > kEpsilonDepth)) continue;
    // lambda1 * K * p, written out; the last row is lambda1 * z.
    const double hx = lambda1 * (k.fx * p.x() + k.cx * p.z());
    const double hy = lambda1 * (k.fy * p.y() + k.cy * p.z());
    const double hz = lambda1 * p.z();
    out.push_back({hx / hz, hy / hz, p.z(), i});
  }
  return out;
}

Point3Set place_in_map(const Point3Set& cloud, const Pose& pose, double lambda2) {
  if (!(lambda2 > 0.0)) throw ValidationError("lambda2 must be positive");
  Point3Set out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points)
    out.points.push_back(lambda2 * (pose.rotation * p) + pose.translation);
  out.colors = cloud.colors;
  return out;
}

}  // namespace egoexo::geom
