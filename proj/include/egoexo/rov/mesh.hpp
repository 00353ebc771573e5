#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "egoexo/geom/point_set.hpp"
#include "egoexo/image.hpp"

namespace egoexo::rov {

/// Triangle mesh in model units. Model frame: +x forward, +y left, +z up.
struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::optional<std::vector<Rgb>> vertex_colors;

  double triangle_area(std::size_t i) const;
  /// Throws ValidationError on out-of-range indices or mismatched colors.
  void validate() const;
};

enum class MeshFormat { ply_ascii, obj };

struct LoadedMesh {
  TriangleMesh mesh;
  /// Zero-area faces removed during load.
  std::size_t dropped_faces = 0;
};

/// Loads an ascii PLY or OBJ mesh, drops zero-area faces and re-centers the
/// vertices on their centroid.
///
/// PLY: `vertex` element with x/y/z and optional red/green/blue (0-255);
/// `face` element with a vertex-index list. OBJ: `v x y z [r g b]` with
/// colors in [0,1], `f` with 1-based or negative indices in any of the
/// v, v/t, v//n, v/t/n forms. Only triangular faces are accepted.
///
/// Throws ParseError on malformed input and NoDataError when no faces remain.
LoadedMesh load_mesh(const std::filesystem::path& path, MeshFormat format);

/// Picks the format from the extension (.ply or .obj).
LoadedMesh load_mesh(const std::filesystem::path& path);

}  // namespace egoexo::rov
