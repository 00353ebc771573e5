#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/point_set.hpp"
#include "egoexo/geom/transfer.hpp"
#include "egoexo/image.hpp"

namespace egoexo::exo {

struct RenderConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int point_radius = 2;
  geom::TransferMode transfer_mode = geom::TransferMode::standard;

  void validate() const;

  /// 2 px at 640 wide, scaled linearly with image width, at least 1.
  static int default_point_radius(const geom::CameraIntrinsics& intrinsics);
};

/// Color for robot points when the cloud carries none.
inline constexpr Rgb kDefaultRobotColor{128, 128, 128};

/// A synthesized third-person view: the reference frame with the robot
/// cloud splatted over it.
struct ExoView {
  RgbImage image;
  std::uint64_t reference_seq = 0;
  std::uint64_t current_seq = 0;
  long long eob_distance = 0;
  bool clamped = false;
  std::size_t overlay_pixel_count = 0;
};

/// Carries `cloud` (expressed in the current camera frame) into the
/// reference camera and projects it. This is the exact geometric path the
/// overlay uses; validation reuses it to measure reprojection error.
std::vector<geom::PixelPoint> project_into_reference(const geom::Pose& reference,
                                                     const geom::Pose& current,
                                                     std::span<const Eigen::Vector3d> cloud,
                                                     const geom::CameraIntrinsics& intrinsics,
                                                     const RenderConfig& cfg);

/// Splats the cloud seen from `reference`, with the robot at `current`.
///
/// Points are painted far-to-near (stable on ties) as filled disks, so the
/// nearest point wins each pixel. reference may equal current; the result
/// then shows the model from its own camera.
ExoView synthesize_between(const buffer::FrameRecord& reference,
                           const buffer::FrameRecord& current, const geom::Point3Set& cloud,
                           const geom::CameraIntrinsics& intrinsics, const RenderConfig& cfg);

/// Exocentric view at EOB distance `eob_distance` behind the newest frame.
///
/// Throws NoDataError when the snapshot holds fewer than 2 frames and
/// ValidationError for eob_distance < 1 or an invalid config.
ExoView synthesize_exo(const buffer::BufferSnapshot& snapshot, long long eob_distance,
                       const geom::Point3Set& cloud, const geom::CameraIntrinsics& intrinsics,
                       const RenderConfig& cfg);

}  // namespace egoexo::exo
