#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/pose.hpp"
#include "egoexo/image.hpp"

namespace egoexo::sim {

struct Landmark {
  std::int64_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Rgb color{255, 255, 255};
};

/// Square tag surrogate lying flat in the z = center.z plane.
struct SceneTag {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double size = 1.0;

  /// Corners counter-clockwise seen from +z, starting at (-x, -y).
  std::array<Eigen::Vector3d, 4> corners() const;
};

struct Scene {
  std::vector<Landmark> landmarks;
  std::optional<SceneTag> tag;
  /// Checkerboard floor at z = ground_z when set.
  bool ground_plane = false;
  double ground_z = 0.0;
  double checker_size = 0.5;

  /// Throws ValidationError on duplicate ids or a non-positive tag size.
  void validate() const;
};

/// `id x y z r g b` per landmark, optional `tag cx cy cz size`, `#` comments.
Scene parse_scene(std::istream& in);
Scene read_scene(const std::filesystem::path& path);
void write_scene(std::ostream& out, const Scene& scene);
void write_scene(const std::filesystem::path& path, const Scene& scene);

/// `count` landmarks scattered over the four walls and ceiling of a box
/// room [-half, half]^2 x [0, height], with a checker floor at z = 0.
Scene make_room_scene(std::size_t count, double half_extent, double height, std::uint64_t seed);

struct VisibleLandmark {
  std::int64_t id = 0;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double depth = 0.0;
};

/// Landmarks in front of the camera whose exact projection is inside
/// [0, width) x [0, height).
std::vector<VisibleLandmark> visible_landmarks(const geom::Pose& pose, const Scene& scene,
                                               const geom::CameraIntrinsics& intrinsics);

struct SceneRender {
  RgbImage image;
  std::vector<VisibleLandmark> landmarks_visible;
  /// Tag corners in pixels, when the tag is in front of the camera.
  std::optional<std::array<Eigen::Vector2d, 4>> tag_corners;
};

SceneRender render_scene(const geom::Pose& pose, const Scene& scene,
                         const geom::CameraIntrinsics& intrinsics);

}  // namespace egoexo::sim
