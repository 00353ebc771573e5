#pragma once

#include "egoexo/geom/homography.hpp"
#include "egoexo/image.hpp"

namespace egoexo::geom {

/// Axis-aligned pixel rectangle in destination coordinates.
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

/// Inverse-mapping warp with bilinear sampling.
///
/// Output pixel (i, j) is destination pixel (region.x + i, region.y + j); its
/// source location is h^-1 applied to that destination pixel center. Pixels
/// whose source location falls outside the source image get alpha 0, the
/// rest alpha 255.
RgbaImage warp_image(const RgbImage& source, const Homography& h, const PixelRect& region);

/// Alpha-composites `overlay` onto `dst` with its top-left at (x0, y0).
void composite_over(RgbImage& dst, const RgbaImage& overlay, int x0, int y0);

}  // namespace egoexo::geom
