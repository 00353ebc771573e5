#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/point_set.hpp"
#include "egoexo/image.hpp"

namespace egoexo::exo {

/// A scene landmark reported by the pose source.
struct MapFeature {
  std::int64_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/// Global map state: camera-center trajectory, scene landmarks, and the
/// robot model placed at the newest pose.
struct MapSnapshot {
  std::vector<Eigen::Vector3d> trajectory;
  geom::Point3Set feature_points;
  std::vector<std::int64_t> feature_ids;
  geom::Point3Set rov_points;
  /// Oldest trajectory entries are dropped beyond this many.
  std::size_t history_limit = 10000;
  std::uint64_t frames_seen = 0;

  bool empty() const noexcept {
    return trajectory.empty() && feature_points.empty() && rov_points.empty();
  }

  /// Position lookup by landmark id, kept in sync by update_map.
  std::unordered_map<std::int64_t, std::size_t> feature_index;
};

/// Appends the newest camera center, re-places the robot model at the newest
/// pose (lambda2 * R * P + t), and merges `features` by id (newer positions
/// replace older ones).
MapSnapshot update_map(MapSnapshot map, const buffer::FrameRecord& newest,
                       const geom::Point3Set& cloud, const RenderConfig& cfg,
                       std::span<const MapFeature> features = {});

struct MapStyle {
  Rgb background{18, 20, 26};
  Rgb trajectory{0, 200, 255};
  Rgb feature{235, 235, 235};
  Rgb current_marker{255, 60, 60};
  int feature_radius = 1;
  int robot_radius = 1;
};

/// Pinhole render of the map from an arbitrary virtual camera: trajectory
/// polyline (near-plane clipped), landmarks, robot points far-to-near, and a
/// marker on the newest camera center. Throws NoDataError on an empty map.
RgbImage render_map_view(const MapSnapshot& map, const geom::Pose& view_pose,
                         const geom::CameraIntrinsics& intrinsics, const MapStyle& style = {});

}  // namespace egoexo::exo
