#include "egoexo/validation/ground_plane.hpp"

#include <cmath>
#include <vector>

#include "egoexo/errors.hpp"
#include "egoexo/exo/raster.hpp"
#include "egoexo/geom/transfer.hpp"

namespace egoexo::validation {

geom::Plane estimate_ground_plane(std::span<const geom::Pose> poses, double camera_height) {
  if (!std::isfinite(camera_height)) throw ValidationError("camera height must be finite");
  std::vector<Eigen::Vector3d> centers;
  Eigen::Vector3d up = Eigen::Vector3d::Zero();
  for (const auto& p : poses) {
    centers.push_back(p.translation);
    up -= p.rotation.col(1);  // image-down is camera +y
  }
  geom::Plane plane = geom::fit_plane(centers).plane;
  if (plane.normal.dot(up) < 0.0) {
    plane.normal = -plane.normal;
    plane.offset = -plane.offset;
  }
  plane.offset -= camera_height;
  return plane;
}

CubeVertices place_cube(const geom::Plane& plane, double size, const geom::Pose& camera,
                        const std::optional<Eigen::Vector3d>& anchor) {
  if (!(size > 0.0)) throw ValidationError("cube size must be positive");
  const Eigen::Vector3d c = camera.translation;
  // Stand on the camera's side of the plane.
  const Eigen::Vector3d n = plane.signed_distance(c) >= 0.0 ? plane.normal : Eigen::Vector3d(-plane.normal);
  const Eigen::Vector3d forward = camera.rotation.col(2);

  Eigen::Vector3d base_center;
  if (anchor) {
    base_center = plane.project(*anchor);
  } else {
    const double denom = plane.normal.dot(forward);
    const double t = std::abs(denom) > 1e-9 ? -plane.signed_distance(c) / denom : -1.0;
    base_center = t > 0.0 ? Eigen::Vector3d(c + t * forward) : plane.project(c + 2.0 * forward);
  }

  Eigen::Vector3d u = forward - forward.dot(n) * n;
  if (u.norm() < 1e-6) {
    const Eigen::Vector3d x = camera.rotation.col(0);
    u = x - x.dot(n) * n;
  }
  u.normalize();
  const Eigen::Vector3d v = n.cross(u);
  const double h = size / 2.0;
  CubeVertices out;
  out[0] = base_center - h * u - h * v;
  out[1] = base_center + h * u - h * v;
  out[2] = base_center + h * u + h * v;
  out[3] = base_center - h * u + h * v;
  for (int i = 0; i < 4; ++i) out[i + 4] = out[i] + size * n;
  return out;
}

const std::array<std::array<int, 2>, 12>& cube_edges() {
  static const std::array<std::array<int, 2>, 12> edges{{{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                                          {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                                          {0, 4}, {1, 5}, {2, 6}, {3, 7}}};
  return edges;
}

RgbImage render_ground_plane_cube(const RgbImage& exo, const geom::Pose& camera, const geom::Plane& plane,
                                  double cube_size, const geom::CameraIntrinsics& k,
                                  const std::optional<Eigen::Vector3d>& anchor, Rgb color) {
  k.validate();
  if (exo.width() != k.width || exo.height() != k.height)
    throw ValidationError("image size does not match the intrinsics");
  const auto cube = place_cube(plane, cube_size, camera, anchor);
  RgbImage out = exo;
  for (const auto& e : cube_edges()) {
    Eigen::Vector3d a = camera.to_camera(cube[e[0]]);
    Eigen::Vector3d b = camera.to_camera(cube[e[1]]);
    if (!exo::clip_to_near_plane(a, b, geom::kEpsilonDepth)) continue;
    const Eigen::Vector2d pa(k.fx * a.x() / a.z() + k.cx, k.fy * a.y() / a.z() + k.cy);
    const Eigen::Vector2d pb(k.fx * b.x() / b.z() + k.cx, k.fy * b.y() / b.z() + k.cy);
    exo::draw_line(out, pa, pb, color);
  }
  return out;
}

}  // namespace egoexo::validation
