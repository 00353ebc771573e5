#include "egoexo/geom/camera.hpp"

#include <cmath>

#include "egoexo/errors.hpp"
#include "egoexo/geom/point_set.hpp"

namespace egoexo::geom {

Eigen::Matrix3d CameraIntrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("focal lengths must be positive");
  if (width <= 0 || height <= 0) throw ValidationError("image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw ValidationError("principal point outside the image");
}

void Point3Set::validate() const {
  for (const auto& p : points)
    if (!p.allFinite()) throw ValidationError("point cloud has non-finite coordinates");
  if (colors && colors->size() != points.size())
    throw ValidationError("point cloud color count differs from point count");
}

}  // namespace egoexo::geom
