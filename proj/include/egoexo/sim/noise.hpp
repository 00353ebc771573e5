#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egoexo/geom/pose.hpp"

namespace egoexo::sim {

struct NoiseModel {
  double sigma_t = 0.0;  // units per step, random-walk translation
  double sigma_r = 0.0;  // rad per step, random-walk axis-angle rotation
  std::uint64_t seed = 0;

  void validate() const;
};

/// Drift model: pose k gets translation offset W_k and right-multiplied
/// rotation D_k, where W_0 = 0, W_k = W_{k-1} + N(0, sigma_t^2 I) and
/// D_0 = I, D_k = D_{k-1} exp(N(0, sigma_r^2 I)). Zero sigmas return the
/// input unchanged.
std::vector<geom::Pose> corrupt_poses(std::span<const geom::Pose> poses, const NoiseModel& noise);

}  // namespace egoexo::sim
