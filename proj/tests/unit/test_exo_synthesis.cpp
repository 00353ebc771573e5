#include <doctest.h>

#include <chrono>
#include <random>

#include "egoexo/errors.hpp"
#include "egoexo/exo/map.hpp"
#include "egoexo/exo/raster.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "support/random_geometry.hpp"

using namespace egoexo;
using namespace egoexo::exo;
using buffer::FrameRecord;
using geom::CameraIntrinsics;
using geom::Point3Set;
using geom::Pose;

namespace {

std::shared_ptr<const RgbImage> blank(const CameraIntrinsics& k, Rgb c = {0, 0, 0}) {
  auto img = std::make_shared<RgbImage>(k.width, k.height);
  fill(*img, c);
  return img;
}

Pose at_z(double z) {
  Pose p;
  p.translation = {0, 0, z};
  return p;
}

buffer::BufferSnapshot straight_run(const CameraIntrinsics& k, int frames, double step = 0.05) {
  buffer::PoseBuffer buf({100, 0.001}, k.width, k.height);
  for (int i = 0; i < frames; ++i) buf.offer(at_z(step * i), blank(k));
  return buf.snapshot();
}

Point3Set cube_cloud(double half, int per_axis, Eigen::Vector3d center = Eigen::Vector3d::Zero()) {
  Point3Set c;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int l = 0; l < per_axis; ++l) {
        const double s = per_axis > 1 ? 2.0 * half / (per_axis - 1) : 0.0;
        c.points.push_back(center + Eigen::Vector3d(-half + s * i, -half + s * j, -half + s * l));
      }
  return c;
}

}  // namespace

TEST_CASE("synthesize_between: self-view of a model behind the camera paints nothing") {
  CameraIntrinsics k;
  const FrameRecord frame{at_z(3.0), blank(k), 5};
  // Every point has z < 0 in the camera frame.
  const auto cloud = cube_cloud(0.2, 5, {0, 0, -1});
  const auto view = synthesize_between(frame, frame, cloud, k, RenderConfig{});
  CHECK(view.overlay_pixel_count == 0);
  CHECK(view.image == *frame.image);
  CHECK(view.eob_distance == 0);
}

TEST_CASE("synthesize_exo: robot ahead of an older frame appears centered") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 20);
  Point3Set robot;
  robot.points = {{0, 0, 0}};
  robot.colors = std::vector<Rgb>{{255, 0, 0}};
  RenderConfig cfg;
  const auto view = synthesize_exo(snap, 10, robot, k, cfg);
  CHECK(view.reference_seq == 9);
  CHECK(view.current_seq == 19);
  CHECK(view.eob_distance == 10);
  CHECK_FALSE(view.clamped);
  // Robot at 0.5 units straight ahead of the reference camera.
  CHECK(get_rgb(view.image, 320, 240) == Rgb{255, 0, 0});
  CHECK(view.overlay_pixel_count == disk_offsets(cfg.point_radius).size());
}

TEST_CASE("synthesize_exo: clamping, warm-up and argument checks") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 20);
  Point3Set robot;
  robot.points = {{0, 0, 0}};
  const auto view = synthesize_exo(snap, 500, robot, k, RenderConfig{});
  CHECK(view.clamped);
  CHECK(view.reference_seq == 0);

  CHECK_THROWS_AS(synthesize_exo(straight_run(k, 1), 1, robot, k, RenderConfig{}), NoDataError);
  CHECK_THROWS_AS(synthesize_exo(snap, 0, robot, k, RenderConfig{}), ValidationError);
  RenderConfig bad;
  bad.point_radius = 0;
  CHECK_THROWS_AS(synthesize_exo(snap, 1, robot, k, bad), ValidationError);
}

TEST_CASE("synthesize_exo: nearer point wins a shared pixel") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 20);
  // Both on the optical axis of the reference (seq 9 at z = 0.45);
  // in current-camera coordinates they sit 0.5 and 2.0 units ahead.
  Point3Set cloud;
  cloud.points = {{0, 0, 0.5}, {0, 0, 2.0}};
  cloud.colors = std::vector<Rgb>{{0, 255, 0}, {0, 0, 255}};
  for (int order = 0; order < 2; ++order) {
    if (order == 1) {
      std::swap(cloud.points[0], cloud.points[1]);
      std::swap((*cloud.colors)[0], (*cloud.colors)[1]);
    }
    const auto view = synthesize_exo(snap, 10, cloud, k, RenderConfig{});
    CHECK(get_rgb(view.image, 320, 240) == Rgb{0, 255, 0});
  }
}

TEST_CASE("synthesize_exo: deterministic output") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 50);
  std::mt19937_64 rng(3);
  Point3Set cloud;
  std::vector<Rgb> colors;
  for (int i = 0; i < 5000; ++i) {
    cloud.points.push_back(egoexo::testing::random_vector(rng, 0.3));
    colors.push_back({static_cast<std::uint8_t>(i % 256), 10, 20});
  }
  cloud.colors = colors;
  const auto a = synthesize_exo(snap, 30, cloud, k, RenderConfig{});
  const auto b = synthesize_exo(snap, 30, cloud, k, RenderConfig{});
  CHECK(a.image == b.image);
  CHECK(a.overlay_pixel_count == b.overlay_pixel_count);
  CHECK(a.overlay_pixel_count > 0);
}

TEST_CASE("synthesize_exo: off-image points are skipped") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 20);
  Point3Set cloud;
  cloud.points = {{100, 0, 0.5}, {0, -100, 0.5}};
  const auto view = synthesize_exo(snap, 10, cloud, k, RenderConfig{});
  CHECK(view.overlay_pixel_count == 0);
}

TEST_CASE("RenderConfig: default radius scales with width") {
  CameraIntrinsics k;
  CHECK(RenderConfig::default_point_radius(k) == 2);
  k.width = 1280;
  CHECK(RenderConfig::default_point_radius(k) == 4);
  k.width = 160;
  CHECK(RenderConfig::default_point_radius(k) == 1);
}

TEST_CASE("update_map: first frame, history, and collinear trajectory") {
  CameraIntrinsics k;
  Point3Set model;
  model.points = {{1, 0, 0}, {0, 2, 0}};
  RenderConfig cfg;
  cfg.lambda2 = 1.5;

  MapSnapshot map;
  map = update_map(std::move(map), FrameRecord{Pose{}, blank(k), 0}, model, cfg);
  REQUIRE(map.trajectory.size() == 1);
  CHECK(map.trajectory[0].norm() == 0.0);
  CHECK((map.rov_points.points[0] - Eigen::Vector3d(1.5, 0, 0)).norm() < 1e-15);
  CHECK((map.rov_points.points[1] - Eigen::Vector3d(0, 3, 0)).norm() < 1e-15);

  for (int i = 1; i < 100; ++i)
    map = update_map(std::move(map), FrameRecord{at_z(i), blank(k), static_cast<std::uint64_t>(i)},
                     model, cfg);
  CHECK(map.trajectory.size() == 100);
  for (const auto& c : map.trajectory) {
    CHECK(std::abs(c.x()) < 1e-9);
    CHECK(std::abs(c.y()) < 1e-9);
  }
  // Robot points move with the camera: +99 along z from the first placement.
  CHECK((map.rov_points.points[0] - Eigen::Vector3d(1.5, 0, 99)).norm() < 1e-12);

  MapSnapshot capped;
  capped.history_limit = 10;
  for (int i = 0; i < 25; ++i)
    capped = update_map(std::move(capped), FrameRecord{at_z(i), blank(k), static_cast<std::uint64_t>(i)},
                        model, cfg);
  CHECK(capped.trajectory.size() == 10);
  CHECK(capped.trajectory.front().z() == 15.0);
  CHECK(capped.frames_seen == 25);
}

TEST_CASE("update_map: features deduplicated by id") {
  CameraIntrinsics k;
  MapSnapshot map;
  const std::vector<MapFeature> first{{1, {0, 0, 0}}, {2, {1, 0, 0}}};
  const std::vector<MapFeature> second{{2, {1, 1, 0}}, {3, {5, 5, 5}}};
  map = update_map(std::move(map), FrameRecord{Pose{}, blank(k), 0}, Point3Set{}, RenderConfig{}, first);
  map = update_map(std::move(map), FrameRecord{at_z(1), blank(k), 1}, Point3Set{}, RenderConfig{}, second);
  CHECK(map.feature_points.size() == 3);
  CHECK(map.feature_ids == std::vector<std::int64_t>{1, 2, 3});
  CHECK(map.feature_points.points[1] == Eigen::Vector3d(1, 1, 0));
}

TEST_CASE("render_map_view: a point on the view axis lands on the principal point") {
  CameraIntrinsics k;
  MapSnapshot map;
  map.trajectory = {{0, 0, 0}};
  const Pose view = geom::look_at({0, 0, 10}, {0, 0, 0}, Eigen::Vector3d::UnitY());
  MapStyle style;
  const auto img = render_map_view(map, view, k, style);
  CHECK(get_rgb(img, 320, 240) == style.current_marker);
  CHECK(get_rgb(img, 10, 10) == style.background);
}

TEST_CASE("render_map_view: +x trajectory seen from above is a horizontal line") {
  CameraIntrinsics k;
  MapSnapshot map;
  for (int i = -5; i <= 5; ++i) map.trajectory.push_back({0.5 * i, 0, 0});
  // Camera at (0,0,5) looking down -z; camera x along world +x.
  Pose view;
  view.rotation << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  view.translation = {0, 0, 5};
  MapStyle style;
  style.current_marker = style.trajectory;  // keep the marker out of the way
  const auto img = render_map_view(map, view, k, style);
  int painted = 0;
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x)
      if (get_rgb(img, x, y) == style.trajectory && std::abs(y - 240) > 3) ++painted;
  CHECK(painted == 0);
  // Segment spans x in [-2.5, 2.5] -> u in [70, 570] on row 240.
  CHECK(get_rgb(img, 70, 240) == style.trajectory);
  CHECK(get_rgb(img, 320, 240) == style.trajectory);
  CHECK(get_rgb(img, 560, 240) == style.trajectory);
  CHECK(get_rgb(img, 60, 240) == style.background);
}

TEST_CASE("render_map_view: only trajectory and robot when there are no features") {
  CameraIntrinsics k;
  MapSnapshot map;
  map.trajectory = {{0, 0, 0}, {1, 0, 0}};
  map.rov_points.points = {{1, 0.2, 0}};
  map.rov_points.colors = std::vector<Rgb>{{10, 250, 10}};
  const Pose view = geom::look_at({0.5, 0, 6}, {0.5, 0, 0}, Eigen::Vector3d::UnitY());
  MapStyle style;
  const auto img = render_map_view(map, view, k, style);
  std::size_t robot = 0, feature = 0;
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x) {
      const auto c = get_rgb(img, x, y);
      robot += c == Rgb{10, 250, 10};
      feature += c == style.feature;
    }
  CHECK(robot > 0);
  CHECK(feature == 0);
  CHECK_THROWS_AS(render_map_view(MapSnapshot{}, view, k), NoDataError);
}

TEST_CASE("synthesize_exo: 640x480 with 10,000 points is fast enough for 25 views/s") {
  CameraIntrinsics k;
  const auto snap = straight_run(k, 100);
  std::mt19937_64 rng(8);
  Point3Set cloud;
  for (int i = 0; i < 10000; ++i) cloud.points.push_back(egoexo::testing::random_vector(rng, 0.3));
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 20;
  for (int i = 0; i < n; ++i) (void)synthesize_exo(snap, 70, cloud, k, RenderConfig{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("views/s: " << n / secs);
  CHECK(n / secs >= 25.0);
}
