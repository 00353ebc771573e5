#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "egoexo/geom/point_set.hpp"
#include "egoexo/rov/mesh.hpp"

namespace egoexo::rov {

struct SampleColors {
  /// Used when the mesh has no vertex colors.
  Rgb body{128, 128, 128};
  /// Tint for the frontmost 10% of points along model +x.
  Rgb accent{255, 140, 0};
};

/// Draws `m` points uniformly over the mesh surface: faces are picked with
/// probability proportional to area, and each point is placed uniformly
/// inside its face. Deterministic for a given seed. Colors are interpolated
/// from vertex colors, else body color with the heading accent.
///
/// Throws ValidationError when m <= 0 and NoDataError on an empty mesh.
geom::Point3Set sample_point_cloud(const TriangleMesh& mesh, long long m, std::uint64_t seed,
                                   const SampleColors& colors = {});

/// Rigid placement of the model relative to the onboard camera.
///
/// The camera frame is x right, y down, z forward. `offset` is the model
/// origin in camera coordinates, `scale` multiplies model units.
struct ModelMount {
  Eigen::Matrix3d rotation = model_to_camera_axes();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  double scale = 1.0;

  /// Maps model axes (x forward, y left, z up) to camera axes.
  static Eigen::Matrix3d model_to_camera_axes();
};

geom::Point3Set mount_in_camera_frame(const geom::Point3Set& model_cloud, const ModelMount& mount);

}  // namespace egoexo::rov
