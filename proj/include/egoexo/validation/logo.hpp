#pragma once

#include <array>
#include <span>

#include "egoexo/geom/homography.hpp"
#include "egoexo/image.hpp"

namespace egoexo::validation {

struct LogoProjection {
  RgbImage ego;  // ego frame with the logo on the tag
  RgbImage exo;  // exo frame with the logo carried over by the homography
  geom::Homography ego_to_exo;
  geom::Homography logo_to_exo;
  /// Logo image corners mapped into the exo frame, in tag-corner order.
  std::array<Eigen::Vector2d, 4> exo_corners;
};

/// Places `logo` on the tag in the ego frame, then carries it into the exo
/// frame with H = estimate_homography(ego corners -> exo corners).
///
/// Logo corners (-0.5, -0.5), (w - 0.5, -0.5), (w - 0.5, h - 0.5),
/// (-0.5, h - 0.5), i.e. its outer pixel edges, map onto tag corners 0..3.
/// Throws ValidationError unless exactly 4 corners are given per frame.
LogoProjection project_logo(const RgbImage& ego_frame, const RgbImage& exo_frame,
                            std::span<const Eigen::Vector2d> tag_corners_ego,
                            std::span<const Eigen::Vector2d> tag_corners_exo, const RgbImage& logo);

/// A small asymmetric test logo.
RgbImage make_logo(int width = 128, int height = 128);

}  // namespace egoexo::validation
