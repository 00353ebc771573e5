#include "egoexo/geom/warp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace egoexo::geom {

namespace {
constexpr double kEdgeSlack = 1e-9;
}

RgbaImage warp_image(const RgbImage& source, const Homography& h, const PixelRect& region) {
  RgbaImage out(std::max(region.width, 0), std::max(region.height, 0));
  if (source.empty() || out.empty()) return out;

  const Eigen::Matrix3d inv = h.h.inverse();
  const double max_x = source.width() - 1;
  const double max_y = source.height() - 1;

  for (int j = 0; j < out.height(); ++j) {
    for (int i = 0; i < out.width(); ++i) {
      const Eigen::Vector3d d(region.x + i, region.y + j, 1.0);
      const Eigen::Vector3d s = inv * d;
      std::uint8_t* px = out.pixel(i, j);
      if (!(std::abs(s.z()) > 0.0)) continue;
      double sx = s.x() / s.z();
      double sy = s.y() / s.z();
      if (!(sx >= -kEdgeSlack && sy >= -kEdgeSlack && sx <= max_x + kEdgeSlack &&
            sy <= max_y + kEdgeSlack))
        continue;
      sx = std::clamp(sx, 0.0, max_x);
      sy = std::clamp(sy, 0.0, max_y);
      const int x0 = std::min(static_cast<int>(sx), source.width() - 1);
      const int y0 = std::min(static_cast<int>(sy), source.height() - 1);
      const int x1 = std::min(x0 + 1, source.width() - 1);
      const int y1 = std::min(y0 + 1, source.height() - 1);
      const double ax = sx - x0;
      const double ay = sy - y0;
      const std::uint8_t* p00 = source.pixel(x0, y0);
      const std::uint8_t* p10 = source.pixel(x1, y0);
      const std::uint8_t* p01 = source.pixel(x0, y1);
      const std::uint8_t* p11 = source.pixel(x1, y1);
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - ax) * p00[c] + ax * p10[c];
        const double bottom = (1.0 - ax) * p01[c] + ax * p11[c];
        const double v = (1.0 - ay) * top + ay * bottom;
        px[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      px[3] = 255;
    }
  }
  return out;
}

void composite_over(RgbImage& dst, const RgbaImage& overlay, int x0, int y0) {
  for (int j = 0; j < overlay.height(); ++j) {
    for (int i = 0; i < overlay.width(); ++i) {
      const int x = x0 + i;
      const int y = y0 + j;
      if (!dst.contains(x, y)) continue;
      const std::uint8_t* src = overlay.pixel(i, j);
      const int a = src[3];
      if (a == 0) continue;
      std::uint8_t* d = dst.pixel(x, y);
      for (int c = 0; c < 3; ++c)
        d[c] = static_cast<std::uint8_t>((src[c] * a + d[c] * (255 - a) + 127) / 255);
    }
  }
}

}  // namespace egoexo::geom
