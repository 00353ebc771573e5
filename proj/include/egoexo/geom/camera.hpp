#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace egoexo::geom {

/// Pinhole intrinsics K plus the image resolution they belong to.
struct CameraIntrinsics {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  Eigen::Matrix3d matrix() const;

  /// Throws ValidationError on non-positive focal length or a principal
  /// point outside [0, size).
  void validate() const;

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

/// One projected point. `index` refers back to the source cloud.
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  std::size_t index = 0;
};

}  // namespace egoexo::geom
