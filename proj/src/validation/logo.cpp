#include "egoexo/validation/logo.hpp"

#include <cmath>

#include "egoexo/errors.hpp"
#include "egoexo/geom/warp.hpp"

namespace egoexo::validation {
namespace {

std::array<Eigen::Vector2d, 4> logo_extent(const RgbImage& logo) {
  const double w = logo.width(), h = logo.height();
  return {Eigen::Vector2d(-0.5, -0.5), Eigen::Vector2d(w - 0.5, -0.5), Eigen::Vector2d(w - 0.5, h - 0.5),
          Eigen::Vector2d(-0.5, h - 0.5)};
}

RgbImage paste(const RgbImage& frame, const RgbImage& logo, const geom::Homography& h) {
  RgbImage out = frame;
  const geom::PixelRect all{0, 0, frame.width(), frame.height()};
  geom::composite_over(out, geom::warp_image(logo, h, all), 0, 0);
  return out;
}

}  // namespace

LogoProjection project_logo(const RgbImage& ego_frame, const RgbImage& exo_frame,
                            std::span<const Eigen::Vector2d> tag_ego, std::span<const Eigen::Vector2d> tag_exo,
                            const RgbImage& logo) {
  if (tag_ego.size() != 4 || tag_exo.size() != 4)
    throw ValidationError("logo projection needs exactly 4 tag corners in each frame");
  if (logo.empty()) throw ValidationError("empty logo");

  const auto extent = logo_extent(logo);
  const geom::Homography logo_to_ego = geom::estimate_homography(extent, tag_ego);
  LogoProjection out;
  out.ego_to_exo = geom::estimate_homography(tag_ego, tag_exo);
  out.logo_to_exo = out.ego_to_exo * logo_to_ego;
  for (int i = 0; i < 4; ++i) out.exo_corners[i] = out.logo_to_exo.apply(extent[i]);
  out.ego = paste(ego_frame, logo, logo_to_ego);
  out.exo = paste(exo_frame, logo, out.logo_to_exo);
  return out;
}

RgbImage make_logo(int width, int height) {
  if (width < 8 || height < 8) throw ValidationError("logo must be at least 8x8");
  RgbImage img(width, height);
  const double cx = width / 2.0, cy = height / 2.0;
  const double r = std::min(width, height) * 0.42;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double d = std::hypot(dx, dy);
      Rgb c{250, 250, 245};
      if (d < r && d > 0.7 * r) c = {255, 122, 0};                 // ring
      else if (d <= 0.7 * r && (x + y) % 16 < 8 && dx > 0) c = {0, 92, 170};  // right-half stripes
      else if (d <= 0.7 * r && dy < 0 && dx <= 0) c = {0, 160, 120};  // top-left wedge
      if (x < 3 || y < 3) c = {200, 20, 40};  // marks the top-left edges
      set_rgb(img, x, y, c);
    }
  return img;
}

}  // namespace egoexo::validation
