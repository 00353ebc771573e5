#include "egoexo/exo/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "egoexo/errors.hpp"
#include "egoexo/exo/raster.hpp"

namespace egoexo::exo {

void RenderConfig::validate() const {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw ValidationError("lambda1 must be positive");
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) throw ValidationError("lambda2 must be positive");
  if (point_radius < 1) throw ValidationError("point radius must be at least 1 px");
}

int RenderConfig::default_point_radius(const geom::CameraIntrinsics& intrinsics) {
  return std::max(1, static_cast<int>(std::lround(2.0 * intrinsics.width / 640.0)));
}

std::vector<geom::PixelPoint> project_into_reference(const geom::Pose& reference,
                                                     const geom::Pose& current,
                                                     std::span<const Eigen::Vector3d> cloud,
                                                     const geom::CameraIntrinsics& intrinsics,
                                                     const RenderConfig& cfg) {
  const geom::RigidMap m = geom::relative_transfer(current, reference, cfg.transfer_mode);
  std::vector<Eigen::Vector3d> moved;
  moved.reserve(cloud.size());
  for (const auto& p : cloud) moved.push_back(m.apply(p));
  return geom::project_points(moved, intrinsics, cfg.lambda1);
}

ExoView synthesize_between(const buffer::FrameRecord& reference,
                           const buffer::FrameRecord& current, const geom::Point3Set& cloud,
                           const geom::CameraIntrinsics& intrinsics, const RenderConfig& cfg) {
  cfg.validate();
  if (!reference.image) throw ValidationError("reference frame has no image");
  if (reference.image->width() != intrinsics.width || reference.image->height() != intrinsics.height)
    throw ValidationError("reference image size does not match the intrinsics");
  if (cloud.colors && cloud.colors->size() != cloud.points.size())
    throw ValidationError("cloud color count differs from point count");

  auto projected = project_into_reference(reference.pose, current.pose, cloud.points, intrinsics, cfg);
  std::stable_sort(projected.begin(), projected.end(),
                   [](const geom::PixelPoint& a, const geom::PixelPoint& b) { return a.depth > b.depth; });

  ExoView view;
  view.image = *reference.image;
  view.reference_seq = reference.seq;
  view.current_seq = current.seq;
  view.eob_distance = static_cast<long long>(current.seq) - static_cast<long long>(reference.seq);

  const auto offsets = disk_offsets(cfg.point_radius);
  PaintMask mask(view.image.width(), view.image.height());
  const double reach = cfg.point_radius + 1.0;
  for (const auto& px : projected) {
    // Cheap reject before rounding: disks entirely off-image.
    if (px.u < -reach || px.v < -reach || px.u > intrinsics.width + reach ||
        px.v > intrinsics.height + reach)
      continue;
    const Rgb color = cloud.colors ? (*cloud.colors)[px.index] : kDefaultRobotColor;
    splat(view.image, static_cast<int>(std::lround(px.u)), static_cast<int>(std::lround(px.v)),
          offsets, color, &mask);
  }
  view.overlay_pixel_count = mask.count();
  return view;
}

ExoView synthesize_exo(const buffer::BufferSnapshot& snapshot, long long eob_distance,
                       const geom::Point3Set& cloud, const geom::CameraIntrinsics& intrinsics,
                       const RenderConfig& cfg) {
  if (eob_distance < 1) throw ValidationError("EOB distance must be at least 1");
  if (snapshot.size() < 2) throw NoDataError("exo synthesis needs at least 2 buffered frames");
  const auto sel = buffer::select_reference(snapshot, eob_distance);
  ExoView view = synthesize_between(sel.record, *snapshot.current(), cloud, intrinsics, cfg);
  view.clamped = sel.clamped;
  return view;
}

}  // namespace egoexo::exo
