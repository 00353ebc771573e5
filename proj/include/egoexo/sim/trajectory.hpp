#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "egoexo/geom/pose.hpp"

namespace egoexo::sim {

struct TrajectoryFile {
  std::vector<geom::Pose> poses;  // sorted by timestamp
  /// Lines whose quaternion was off unit norm by more than 1e-6.
  std::size_t normalized_quaternions = 0;
};

/// Parses `timestamp tx ty tz qx qy qz qw` lines; `#` starts a comment.
/// Quaternions are normalized; a zero quaternion is a parse error.
TrajectoryFile parse_trajectory(std::istream& in);
TrajectoryFile read_trajectory(const std::filesystem::path& path);

void write_trajectory(std::ostream& out, std::span<const geom::Pose> poses);
void write_trajectory(const std::filesystem::path& path, std::span<const geom::Pose> poses);

/// Unicycle on the z = height plane. World z is up; the camera looks along
/// the heading with image-down = world -z.
struct PlanarParams {
  double linear_velocity = 0.05;   // units per second
  double angular_velocity = 0.02;  // rad per second
  double dt = 1.0;
  double camera_height = 0.3;
  /// With the default heading this centers the circle on the origin.
  Eigen::Vector2d start{0.0, -2.5};
  double heading = 0.0;

  void validate() const;
};

/// Exact arc integration, so constant (v, omega) traces a circle of radius
/// v/omega to rounding.
std::vector<geom::Pose> generate_planar(const PlanarParams& params, std::size_t steps);

/// Camera axes for a planar heading: forward (cos, sin, 0), down -z.
Eigen::Matrix3d planar_rotation(double heading);

struct SplineParams {
  /// At least 2; the spline passes through each.
  std::vector<Eigen::Vector3d> waypoints;
  /// Roll per unit of signed lateral curvature, radians.
  double bank_gain = 0.6;
  double dt = 0.05;

  void validate() const;
  /// A looping course around the origin used by the simulator defaults.
  static SplineParams default_course();
};

/// Natural cubic spline (C2) through the waypoints, sampled uniformly in the
/// spline parameter. Heading follows the tangent; roll follows curvature.
std::vector<geom::Pose> generate_smooth_6dof(const SplineParams& params, std::size_t steps);

}  // namespace egoexo::sim
