#pragma once

#include <array>
#include <optional>
#include <span>

#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/plane.hpp"
#include "egoexo/geom/pose.hpp"
#include "egoexo/image.hpp"

namespace egoexo::validation {

/// Least-squares plane through the camera centers, oriented toward the
/// cameras' image-up and lowered by camera_height along that normal.
/// Throws DegenerateInputError for < 3 poses or a collinear path.
geom::Plane estimate_ground_plane(std::span<const geom::Pose> poses, double camera_height);

/// Vertices 0-3 are the base (on the plane), 4-7 the top, vertex i+4 above i.
using CubeVertices = std::array<Eigen::Vector3d, 8>;

/// Cube of edge `size` standing on `plane` on the camera's side, its base
/// centered on the anchor's projection onto the plane. Base edges follow the
/// camera's forward axis projected into the plane (its x axis when looking
/// straight down). The default anchor is where the optical axis meets the
/// plane, or the point 2 units ahead projected onto it when it does not.
CubeVertices place_cube(const geom::Plane& plane, double size, const geom::Pose& camera,
                        const std::optional<Eigen::Vector3d>& anchor = std::nullopt);

/// Index pairs of the 12 cube edges.
const std::array<std::array<int, 2>, 12>& cube_edges();

/// Wireframe cube drawn over `exo` as seen from `camera`. Edges are clipped
/// to the near plane; no hidden-line removal.
RgbImage render_ground_plane_cube(const RgbImage& exo, const geom::Pose& camera, const geom::Plane& plane,
                                  double cube_size, const geom::CameraIntrinsics& intrinsics,
                                  const std::optional<Eigen::Vector3d>& anchor = std::nullopt,
                                  Rgb color = {255, 220, 0});

}  // namespace egoexo::validation
