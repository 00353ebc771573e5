#include "egoexo/validation/figures.hpp"

#include <algorithm>

#include "egoexo/errors.hpp"
#include "egoexo/sim/noise.hpp"
#include "egoexo/validation/ground_plane.hpp"

namespace egoexo::validation {
namespace {

bool in_image(const Eigen::Vector2d& p, const geom::CameraIntrinsics& k) {
  return p.x() >= 0 && p.y() >= 0 && p.x() < k.width && p.y() < k.height;
}

}  // namespace

FigureSetup make_figure_setup(const DriftStudyParams& params, long long f, std::size_t current, double tag_size) {
  const auto& sp = params.simulation;
  if (sp.kind != sim::TrajectoryKind::planar_2dof) throw ValidationError("figures need a planar run");
  if (f < 1 || current < static_cast<std::size_t>(f)) throw ValidationError("current frame must be at least f");
  if (current >= sp.steps) throw ValidationError("current frame is past the end of the run");

  FigureSetup s;
  s.truth = sim::simulation_trajectory(sp);
  s.estimate = sim::corrupt_poses(s.truth, sp.noise);
  s.scene = sim::make_room_scene(sp.landmarks, sp.room_half_extent, sp.room_height, sp.scene_seed);
  s.intrinsics = sp.intrinsics;
  s.current = current;
  s.reference = current - static_cast<std::size_t>(f);
  s.camera_height = sp.planar.camera_height;

  const auto& a = s.truth[s.reference];
  const auto& b = s.truth[s.current];
  Eigen::Vector3d fwd = a.rotation.col(2) + b.rotation.col(2);
  fwd.z() = 0.0;
  if (fwd.norm() < 1e-9) throw DegenerateInputError("cameras face opposite directions");
  Eigen::Vector3d center = 0.5 * (a.translation + b.translation) + 3.0 * fwd.normalized();
  center.z() = s.scene.ground_z;
  s.scene.tag = sim::SceneTag{center, tag_size};
  return s;
}

CubeFigure render_cube_figure(const FigureSetup& setup, const geom::Point3Set& cloud, const exo::RenderConfig& cfg,
                              double cube_size) {
  CubeFigure out;
  const std::span<const geom::Pose> seen(setup.estimate.data(), setup.current + 1);
  out.plane = estimate_ground_plane(seen, setup.camera_height);

  buffer::FrameRecord ref;
  ref.pose = setup.estimate[setup.reference];
  ref.image = std::make_shared<const RgbImage>(
      sim::render_scene(setup.truth[setup.reference], setup.scene, setup.intrinsics).image);
  ref.seq = setup.reference;
  buffer::FrameRecord cur;
  cur.pose = setup.estimate[setup.current];
  cur.seq = setup.current;
  out.exo = exo::synthesize_between(ref, cur, cloud, setup.intrinsics, cfg);
  // Ahead of the reference camera and off to its right, clear of the robot.
  const Eigen::Vector3d anchor = ref.pose.translation + 2.0 * ref.pose.rotation.col(2) + 0.8 * ref.pose.rotation.col(0);
  out.image = render_ground_plane_cube(out.exo.image, ref.pose, out.plane, cube_size, setup.intrinsics, anchor);
  return out;
}

LogoFigure render_logo_figure(const FigureSetup& setup, const RgbImage& logo) {
  if (!setup.scene.tag) throw ValidationError("figure setup has no tag");
  const auto ego = sim::render_scene(setup.truth[setup.current], setup.scene, setup.intrinsics);
  const auto exo = sim::render_scene(setup.truth[setup.reference], setup.scene, setup.intrinsics);
  if (!ego.tag_corners || !exo.tag_corners) throw NoDataError("tag is behind a camera");
  for (const auto* corners : {&*ego.tag_corners, &*exo.tag_corners})
    for (const auto& p : *corners)
      if (!in_image(p, setup.intrinsics)) throw NoDataError("tag is not fully in view");

  LogoFigure out;
  out.projection = project_logo(ego.image, exo.image, *ego.tag_corners, *exo.tag_corners, logo);
  const auto corners = setup.scene.tag->corners();
  const auto& cam = setup.truth[setup.reference];
  const auto& k = setup.intrinsics;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d c = cam.to_camera(corners[i]);
    out.analytic_exo[i] = {k.fx * c.x() / c.z() + k.cx, k.fy * c.y() / c.z() + k.cy};
    out.max_corner_error = std::max(out.max_corner_error, (out.projection.exo_corners[i] - out.analytic_exo[i]).norm());
  }
  return out;
}

}  // namespace egoexo::validation
