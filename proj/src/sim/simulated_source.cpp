#include "egoexo/errors.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::sim {

void SimulationParams::validate() const {
  if (steps < 2) throw ValidationError("simulation needs at least 2 steps");
  if (!(room_half_extent > 0.0) || !(room_height > 0.0)) throw ValidationError("room must be non-empty");
  noise.validate();
  intrinsics.validate();
  planar.validate();
  if (kind == TrajectoryKind::smooth_6dof) spline.validate();
}

std::vector<geom::Pose> simulation_trajectory(const SimulationParams& params) {
  params.validate();
  return params.kind == TrajectoryKind::planar_2dof ? generate_planar(params.planar, params.steps)
                                                    : generate_smooth_6dof(params.spline, params.steps);
}

SimulatedSource::SimulatedSource(const SimulationParams& params)
    : SimulatedSource(simulation_trajectory(params),
                      make_room_scene(params.landmarks, params.room_half_extent, params.room_height,
                                      params.scene_seed),
                      params.intrinsics, params.noise, params.render_images) {}

SimulatedSource::SimulatedSource(std::vector<geom::Pose> ground_truth, Scene scene,
                                 const geom::CameraIntrinsics& intrinsics, const NoiseModel& noise,
                                 bool render_images)
    : truth_(std::move(ground_truth)),
      scene_(std::move(scene)),
      intrinsics_(intrinsics),
      render_images_(render_images) {
  intrinsics_.validate();
  scene_.validate();
  estimate_ = corrupt_poses(truth_, noise);
  for (std::size_t j = 0; j < scene_.landmarks.size(); ++j) landmark_index_.emplace(scene_.landmarks[j].id, j);
  if (!render_images_) blank_ = std::make_shared<const RgbImage>(intrinsics_.width, intrinsics_.height);
}

std::optional<PoseSourceEvent> SimulatedSource::next() {
  if (cursor_ >= truth_.size()) return std::nullopt;
  const std::size_t i = cursor_++;
  PoseSourceEvent ev;
  ev.pose = estimate_[i];
  ev.ground_truth = truth_[i];
  std::vector<VisibleLandmark> visible;
  if (render_images_) {
    auto r = render_scene(truth_[i], scene_, intrinsics_);
    ev.image = std::make_shared<const RgbImage>(std::move(r.image));
    visible = std::move(r.landmarks_visible);
  } else {
    ev.image = blank_;
    visible = visible_landmarks(truth_[i], scene_, intrinsics_);
  }
  std::vector<exo::MapFeature> features;
  features.reserve(visible.size());
  for (const auto& v : visible) features.push_back({v.id, scene_.landmarks[landmark_index_.at(v.id)].position});
  ev.landmarks_visible = std::move(visible);
  ev.map_points = std::move(features);
  return ev;
}

}  // namespace egoexo::sim
