#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "egoexo/image.hpp"

namespace egoexo::exo {

/// Integer offsets of a filled disk of the given radius (dx^2 + dy^2 <= r^2).
std::vector<Eigen::Vector2i> disk_offsets(int radius);

/// Per-pixel "painted" flags; counts distinct pixels touched.
class PaintMask {
 public:
  PaintMask(int width, int height)
      : width_(width), flags_(static_cast<std::size_t>(width) * height, 0) {}

  void mark(int x, int y) {
    auto& f = flags_[static_cast<std::size_t>(y) * width_ + x];
    count_ += f == 0;
    f = 1;
  }
  std::size_t count() const noexcept { return count_; }

 private:
  int width_;
  std::vector<std::uint8_t> flags_;
  std::size_t count_ = 0;
};

/// Paints a disk centered on pixel (cx, cy); pixels outside the image are
/// skipped.
void splat(RgbImage& img, int cx, int cy, const std::vector<Eigen::Vector2i>& offsets, Rgb color,
           PaintMask* mask = nullptr);

/// Draws the segment a-b (pixel coordinates), clipped to the image.
void draw_line(RgbImage& img, const Eigen::Vector2d& a, const Eigen::Vector2d& b, Rgb color,
               PaintMask* mask = nullptr);

/// Clips a camera-space segment to z >= near. Returns false when nothing
/// remains in front of the camera.
bool clip_to_near_plane(Eigen::Vector3d& a, Eigen::Vector3d& b, double near);

}  // namespace egoexo::exo
