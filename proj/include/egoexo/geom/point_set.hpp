#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "egoexo/image.hpp"

namespace egoexo::geom {

/// A point cloud with optional per-point colors.
struct Point3Set {
  std::vector<Eigen::Vector3d> points;
  std::optional<std::vector<Rgb>> colors;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  /// Throws ValidationError on non-finite coordinates or a color list
  /// whose length differs from the point list.
  void validate() const;
};

}  // namespace egoexo::geom
