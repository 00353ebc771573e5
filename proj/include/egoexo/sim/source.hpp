#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "egoexo/exo/map.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/pose.hpp"
#include "egoexo/image.hpp"
#include "egoexo/sim/noise.hpp"
#include "egoexo/sim/scene.hpp"
#include "egoexo/sim/trajectory.hpp"

namespace egoexo::sim {

/// One step of a pose source: the SLAM stand-in's (pose, image) pair plus
/// whatever ground truth the source knows.
struct PoseSourceEvent {
  geom::Pose pose;
  std::shared_ptr<const RgbImage> image;
  std::optional<std::vector<VisibleLandmark>> landmarks_visible;
  std::optional<std::vector<exo::MapFeature>> map_points;
  /// Exact pose when the source is synthetic and `pose` is noisy.
  std::optional<geom::Pose> ground_truth;
};

class PoseSource {
 public:
  virtual ~PoseSource() = default;
  /// Next event in timestamp order, or nullopt when exhausted.
  virtual std::optional<PoseSourceEvent> next() = 0;
  /// Number of events this source will emit, when known.
  virtual std::optional<std::size_t> size_hint() const { return std::nullopt; }
};

struct ReplayOptions {
  /// Max |pose ts - image ts| for nearest-timestamp pairing, seconds.
  double tolerance = 0.02;
  /// Defaults to <image_dir>/associations.txt when that file exists.
  std::optional<std::filesystem::path> associations;
};

/// A pose matched to an image file.
struct ReplayPair {
  geom::Pose pose;
  std::filesystem::path image;
  double image_timestamp = 0.0;
};

/// Trajectory file + directory of PNG/JPEG images named by timestamp.
///
/// Pairing happens in the constructor; images load lazily in next().
/// associations.txt lines are `pose_timestamp image_file`, the file relative
/// to the image directory.
class ReplaySource final : public PoseSource {
 public:
  ReplaySource(const std::filesystem::path& trajectory, const std::filesystem::path& image_dir,
               const ReplayOptions& options = {});

  std::optional<PoseSourceEvent> next() override;
  std::optional<std::size_t> size_hint() const override { return pairs_.size(); }

  const std::vector<ReplayPair>& pairs() const noexcept { return pairs_; }
  std::size_t unmatched_poses() const noexcept { return unmatched_; }
  std::size_t normalized_quaternions() const noexcept { return normalized_; }

 private:
  std::vector<ReplayPair> pairs_;
  std::size_t cursor_ = 0;
  std::size_t unmatched_ = 0;
  std::size_t normalized_ = 0;
};

enum class TrajectoryKind { planar_2dof, smooth_6dof };

struct SimulationParams {
  TrajectoryKind kind = TrajectoryKind::smooth_6dof;
  std::size_t steps = 200;
  std::size_t landmarks = 100;
  std::uint64_t scene_seed = 1;
  NoiseModel noise;
  PlanarParams planar;
  SplineParams spline = SplineParams::default_course();
  double room_half_extent = 8.0;
  double room_height = 4.0;
  /// Render egocentric images; when false every event shares one blank frame.
  bool render_images = true;
  geom::CameraIntrinsics intrinsics;

  void validate() const;
};

/// Synthetic source: ground-truth trajectory, noisy estimate, room scene.
/// `pose` carries the estimate; images and landmarks come from ground truth.
class SimulatedSource final : public PoseSource {
 public:
  explicit SimulatedSource(const SimulationParams& params);
  SimulatedSource(std::vector<geom::Pose> ground_truth, Scene scene,
                  const geom::CameraIntrinsics& intrinsics, const NoiseModel& noise,
                  bool render_images = true);

  std::optional<PoseSourceEvent> next() override;
  std::optional<std::size_t> size_hint() const override { return truth_.size(); }

  const std::vector<geom::Pose>& ground_truth() const noexcept { return truth_; }
  const std::vector<geom::Pose>& estimated() const noexcept { return estimate_; }
  const Scene& scene() const noexcept { return scene_; }
  const geom::CameraIntrinsics& intrinsics() const noexcept { return intrinsics_; }

 private:
  std::vector<geom::Pose> truth_;
  std::vector<geom::Pose> estimate_;
  Scene scene_;
  geom::CameraIntrinsics intrinsics_;
  bool render_images_ = true;
  std::shared_ptr<const RgbImage> blank_;
  std::unordered_map<std::int64_t, std::size_t> landmark_index_;
  std::size_t cursor_ = 0;
};

/// Ground-truth trajectory for the given params.
std::vector<geom::Pose> simulation_trajectory(const SimulationParams& params);

}  // namespace egoexo::sim
