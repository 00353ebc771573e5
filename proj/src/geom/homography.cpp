#include "egoexo/geom/homography.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "egoexo/errors.hpp"

namespace egoexo::geom {

namespace {

// Similarity that moves the centroid to the origin and the mean distance
// from it to sqrt(2).
Eigen::Matrix3d normalizing_transform(std::span<const Eigen::Vector2d> pts) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - c).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 0.0)) throw DegenerateInputError("homography: coincident points");
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * c.x(), 0.0, s, -s * c.y(), 0.0, 0.0, 1.0;
  return t;
}

Eigen::Vector2d apply_h(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = h * p.homogeneous();
  return q.hnormalized();
}

double triangle_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d u = b - a;
  const Eigen::Vector2d v = c - a;
  return u.x() * v.y() - u.y() * v.x();
}

bool has_collinear_triple(std::span<const Eigen::Vector2d> pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (std::abs(triangle_area2(pts[i], pts[j], pts[k])) < 1e-9) return true;
  return false;
}

}  // namespace

Eigen::Vector2d Homography::apply(const Eigen::Vector2d& p) const { return apply_h(h, p); }

Homography Homography::inverse() const { return normalized(h.inverse()); }

Homography Homography::operator*(const Homography& rhs) const { return normalized(h * rhs.h); }

Homography Homography::normalized(const Eigen::Matrix3d& m) {
  Homography out;
  out.h = m;
  if (m(2, 2) != 0.0) out.h /= m(2, 2);
  return out;
}

Homography estimate_homography(std::span<const Eigen::Vector2d> src,
                               std::span<const Eigen::Vector2d> dst) {
  if (src.size() != dst.size())
    throw ValidationError("homography: correspondence lists differ in length");
  if (src.size() < 4) throw ValidationError("homography: need at least 4 correspondences");

  const Eigen::Matrix3d ts = normalizing_transform(src);
  const Eigen::Matrix3d td = normalizing_transform(dst);

  std::vector<Eigen::Vector2d> ns(src.size()), nd(dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    ns[i] = apply_h(ts, src[i]);
    nd[i] = apply_h(td, dst[i]);
  }
  if (src.size() == 4 && (has_collinear_triple(ns) || has_collinear_triple(nd)))
    throw DegenerateInputError("homography: three of the four points are collinear");

  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::Matrix<double, Eigen::Dynamic, 9> a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = ns[i].x(), y = ns[i].y();
    const double u = nd[i].x(), v = nd[i].y();
    a.row(2 * i) << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
  }

  // Pad to 9 rows so the SVD always exposes a full 9-dim right basis.
  Eigen::Matrix<double, Eigen::Dynamic, 9> padded = a;
  if (padded.rows() < 9) {
    padded.conservativeResize(9, Eigen::NoChange);
    padded.bottomRows(9 - a.rows()).setZero();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 9>> svd(padded, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // A unique solution needs a one-dimensional null space.
  if (!(sv(0) > 0.0) || sv(7) <= 1e-10 * sv(0))
    throw DegenerateInputError("homography: rank-deficient correspondence system");

  const Eigen::Matrix<double, 9, 1> hv = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);

  const Eigen::Matrix3d h = td.inverse() * hn * ts;
  if (std::abs(h.determinant()) <= 1e-12 * std::pow(h.norm(), 3))
    throw DegenerateInputError("homography: estimated matrix is singular");
  return Homography::normalized(h);
}

}  // namespace egoexo::geom
