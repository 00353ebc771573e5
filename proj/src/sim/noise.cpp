#include <cmath>
#include <random>

#include "egoexo/errors.hpp"
#include "egoexo/sim/noise.hpp"

namespace egoexo::sim {

void NoiseModel::validate() const {
  if (!(sigma_t >= 0.0) || !std::isfinite(sigma_t)) throw ValidationError("sigma_t must be >= 0");
  if (!(sigma_r >= 0.0) || !std::isfinite(sigma_r)) throw ValidationError("sigma_r must be >= 0");
}

std::vector<geom::Pose> corrupt_poses(std::span<const geom::Pose> poses, const NoiseModel& noise) {
  noise.validate();
  std::vector<geom::Pose> out(poses.begin(), poses.end());
  if (noise.sigma_t == 0.0 && noise.sigma_r == 0.0) return out;

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::Vector3d walk = Eigen::Vector3d::Zero();
  Eigen::Matrix3d drift = Eigen::Matrix3d::Identity();
  for (std::size_t k = 1; k < out.size(); ++k) {
    // Draw all six every step so the stream does not depend on which sigma is zero.
    Eigen::Vector3d dt, dr;
    for (int i = 0; i < 3; ++i) dt[i] = n01(rng);
    for (int i = 0; i < 3; ++i) dr[i] = n01(rng);
    walk += noise.sigma_t * dt;
    const Eigen::Vector3d rv = noise.sigma_r * dr;
    const double angle = rv.norm();
    if (angle > 0.0) drift = geom::orthonormalize(drift * geom::axis_angle(rv / angle, angle));
    out[k].translation += walk;
    if (noise.sigma_r > 0.0) out[k].rotation = geom::orthonormalize(out[k].rotation * drift);
  }
  return out;
}

}  // namespace egoexo::sim
