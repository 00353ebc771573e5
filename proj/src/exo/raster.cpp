#include "egoexo/exo/raster.hpp"

#include <algorithm>
#include <cmath>

namespace egoexo::exo {

std::vector<Eigen::Vector2i> disk_offsets(int radius) {
  std::vector<Eigen::Vector2i> out;
  const int r = std::max(radius, 0);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) out.emplace_back(dx, dy);
  return out;
}

void splat(RgbImage& img, int cx, int cy, const std::vector<Eigen::Vector2i>& offsets, Rgb color,
           PaintMask* mask) {
  for (const auto& o : offsets) {
    const int x = cx + o.x();
    const int y = cy + o.y();
    if (!img.contains(x, y)) continue;
    set_rgb(img, x, y, color);
    if (mask) mask->mark(x, y);
  }
}

namespace {

// Liang-Barsky against [xmin, xmax] x [ymin, ymax].
bool clip_2d(Eigen::Vector2d& a, Eigen::Vector2d& b, double xmin, double ymin, double xmax,
             double ymax) {
  const Eigen::Vector2d d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - xmin, xmax - a.x(), a.y() - ymin, ymax - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  const Eigen::Vector2d a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

}  // namespace

void draw_line(RgbImage& img, const Eigen::Vector2d& a_in, const Eigen::Vector2d& b_in, Rgb color,
               PaintMask* mask) {
  if (img.empty() || !a_in.allFinite() || !b_in.allFinite()) return;
  Eigen::Vector2d a = a_in, b = b_in;
  if (!clip_2d(a, b, -0.5, -0.5, img.width() - 0.5, img.height() - 0.5)) return;
  const double len = std::max(std::abs(b.x() - a.x()), std::abs(b.y() - a.y()));
  const int steps = std::max(1, static_cast<int>(std::ceil(len)));
  for (int i = 0; i <= steps; ++i) {
    const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(i) / steps);
    const int x = static_cast<int>(std::lround(p.x()));
    const int y = static_cast<int>(std::lround(p.y()));
    if (!img.contains(x, y)) continue;
    set_rgb(img, x, y, color);
    if (mask) mask->mark(x, y);
  }
}

bool clip_to_near_plane(Eigen::Vector3d& a, Eigen::Vector3d& b, double near) {
  const bool a_in = a.z() >= near;
  const bool b_in = b.z() >= near;
  if (a_in && b_in) return true;
  if (!a_in && !b_in) return false;
  const double t = (near - a.z()) / (b.z() - a.z());
  const Eigen::Vector3d hit = a + t * (b - a);
  if (a_in)
    b = hit;
  else
    a = hit;
  return true;
}

}  // namespace egoexo::exo
