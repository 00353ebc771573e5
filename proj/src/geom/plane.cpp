#include "egoexo/geom/plane.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "egoexo/errors.hpp"

namespace egoexo::geom {

PlaneFit fit_plane(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 3) throw DegenerateInputError("plane fit needs at least 3 points");

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - centroid;
    scatter += d * d.transpose();
  }

  // Eigenvalues come back ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d ev = eig.eigenvalues();
  if (!(ev(2) > 0.0) || ev(1) <= 1e-12 * ev(2))
    throw DegenerateInputError("plane fit input is collinear or coincident");

  Eigen::Vector3d n = eig.eigenvectors().col(0).normalized();
  double offset = n.dot(centroid);
  const double scale = std::max(1.0, centroid.norm());
  if (std::abs(offset) <= 1e-12 * scale) {
    Eigen::Index k;
    n.cwiseAbs().maxCoeff(&k);
    if (n(k) < 0.0) n = -n;
    offset = n.dot(centroid);
  } else if (offset < 0.0) {
    n = -n;
    offset = -offset;
  }

  double sq = 0.0;
  for (const auto& p : points) {
    const double d = n.dot(p - centroid);
    sq += d * d;
  }

  PlaneFit fit;
  fit.plane.normal = n;
  fit.plane.offset = offset;
  fit.rms_residual = std::sqrt(sq / static_cast<double>(points.size()));
  return fit;
}

}  // namespace egoexo::geom
