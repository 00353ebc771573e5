#include "egoexo/exo/map.hpp"

#include <algorithm>
#include <cmath>

#include "egoexo/errors.hpp"
#include "egoexo/exo/raster.hpp"
#include "egoexo/geom/transfer.hpp"

namespace egoexo::exo {

MapSnapshot update_map(MapSnapshot map, const buffer::FrameRecord& newest,
                       const geom::Point3Set& cloud, const RenderConfig& cfg,
                       std::span<const MapFeature> features) {
  cfg.validate();
  map.trajectory.push_back(newest.pose.translation);
  if (map.history_limit > 0 && map.trajectory.size() > map.history_limit) {
    const auto excess = static_cast<std::ptrdiff_t>(map.trajectory.size() - map.history_limit);
    map.trajectory.erase(map.trajectory.begin(), map.trajectory.begin() + excess);
  }
  ++map.frames_seen;

  map.rov_points = geom::place_in_map(cloud, newest.pose, cfg.lambda2);

  for (const auto& f : features) {
    const auto it = map.feature_index.find(f.id);
    if (it != map.feature_index.end()) {
      map.feature_points.points[it->second] = f.position;
      continue;
    }
    map.feature_index.emplace(f.id, map.feature_points.points.size());
    map.feature_points.points.push_back(f.position);
    map.feature_ids.push_back(f.id);
  }
  return map;
}

RgbImage render_map_view(const MapSnapshot& map, const geom::Pose& view_pose,
                         const geom::CameraIntrinsics& k, const MapStyle& style) {
  if (map.empty()) throw NoDataError("map is empty");
  k.validate();
  view_pose.validate();

  RgbImage img(k.width, k.height);
  fill(img, style.background);
  const geom::Pose world_to_cam = view_pose.inverse();
  auto to_cam = [&](const Eigen::Vector3d& p) { return world_to_cam.to_world(p); };
  auto pixel_of = [&](const Eigen::Vector3d& c) -> Eigen::Vector2d {
    return {k.fx * c.x() / c.z() + k.cx, k.fy * c.y() / c.z() + k.cy};
  };
  // Keeps lround well-defined for points grazing the near plane.
  auto on_canvas = [&](const Eigen::Vector2d& px) {
    return std::abs(px.x()) < 1e7 && std::abs(px.y()) < 1e7;
  };

  for (std::size_t i = 1; i < map.trajectory.size(); ++i) {
    Eigen::Vector3d a = to_cam(map.trajectory[i - 1]);
    Eigen::Vector3d b = to_cam(map.trajectory[i]);
    if (!clip_to_near_plane(a, b, geom::kEpsilonDepth)) continue;
    draw_line(img, pixel_of(a), pixel_of(b), style.trajectory);
  }

  const auto feature_disk = disk_offsets(style.feature_radius);
  for (std::size_t i = 0; i < map.feature_points.size(); ++i) {
    const Eigen::Vector3d c = to_cam(map.feature_points.points[i]);
    if (!(c.z() > geom::kEpsilonDepth)) continue;
    const Eigen::Vector2d px = pixel_of(c);
    if (!on_canvas(px)) continue;
    const Rgb color = map.feature_points.colors ? (*map.feature_points.colors)[i] : style.feature;
    splat(img, static_cast<int>(std::lround(px.x())), static_cast<int>(std::lround(px.y())),
          feature_disk, color);
  }

  std::vector<Eigen::Vector3d> rov_cam;
  rov_cam.reserve(map.rov_points.size());
  for (const auto& p : map.rov_points.points) rov_cam.push_back(to_cam(p));
  auto rov_px = geom::project_points(rov_cam, k);
  std::stable_sort(rov_px.begin(), rov_px.end(),
                   [](const geom::PixelPoint& a, const geom::PixelPoint& b) { return a.depth > b.depth; });
  const auto robot_disk = disk_offsets(style.robot_radius);
  for (const auto& px : rov_px) {
    if (!on_canvas({px.u, px.v})) continue;
    const Rgb color = map.rov_points.colors ? (*map.rov_points.colors)[px.index] : kDefaultRobotColor;
    splat(img, static_cast<int>(std::lround(px.u)), static_cast<int>(std::lround(px.v)), robot_disk,
          color);
  }

  if (!map.trajectory.empty()) {
    const Eigen::Vector3d c = to_cam(map.trajectory.back());
    if (c.z() > geom::kEpsilonDepth) {
      const Eigen::Vector2d px = pixel_of(c);
      if (on_canvas(px))
        splat(img, static_cast<int>(std::lround(px.x())), static_cast<int>(std::lround(px.y())),
            disk_offsets(3), style.current_marker);
    }
  }
  return img;
}

}  // namespace egoexo::exo
