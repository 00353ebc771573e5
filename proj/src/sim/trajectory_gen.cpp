#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "egoexo/errors.hpp"
#include "egoexo/sim/trajectory.hpp"

namespace egoexo::sim {
namespace {

void require_steps(std::size_t steps) {
  if (steps < 2) throw ValidationError("trajectory needs at least 2 steps");
}

bool finite(double v) { return std::isfinite(v); }

// Natural cubic spline on unit-spaced knots, one instance per axis.
class NaturalSpline {
 public:
  explicit NaturalSpline(std::vector<double> y) : y_(std::move(y)), m_(y_.size(), 0.0) {
    const std::size_t n = y_.size();
    if (n < 3) return;
    // Thomas algorithm on M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]).
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
      const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
      c[i] = 1.0 / denom;
      d[i] = (rhs - (i > 1 ? d[i - 1] : 0.0)) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  // value, first and second derivative at parameter s in [0, n-1]
  std::array<double, 3> eval(double s) const {
    const std::size_t last = y_.size() - 2;
    const std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(s))), last);
    const double u = s - static_cast<double>(i);
    const double a = 1.0 - u;
    const double mi = m_[i], mj = m_[i + 1];
    const double val = a * y_[i] + u * y_[i + 1] + ((a * a * a - a) * mi + (u * u * u - u) * mj) / 6.0;
    const double d1 = y_[i + 1] - y_[i] + ((1.0 - 3.0 * a * a) * mi + (3.0 * u * u - 1.0) * mj) / 6.0;
    const double d2 = a * mi + u * mj;
    return {val, d1, d2};
  }

 private:
  std::vector<double> y_;
  std::vector<double> m_;
};

}  // namespace

void PlanarParams::validate() const {
  if (!(dt > 0.0) || !finite(dt)) throw ValidationError("dt must be positive");
  if (!finite(linear_velocity) || !finite(angular_velocity) || !finite(camera_height) ||
      !finite(heading) || !start.allFinite())
    throw ValidationError("planar parameters must be finite");
}

Eigen::Matrix3d planar_rotation(double heading) {
  const double c = std::cos(heading), s = std::sin(heading);
  Eigen::Matrix3d r;
  // columns: camera x (right), y (down), z (forward) in world coordinates
  r.col(0) = Eigen::Vector3d(s, -c, 0.0);
  r.col(1) = Eigen::Vector3d(0.0, 0.0, -1.0);
  r.col(2) = Eigen::Vector3d(c, s, 0.0);
  return r;
}

std::vector<geom::Pose> generate_planar(const PlanarParams& p, std::size_t steps) {
  require_steps(steps);
  p.validate();
  std::vector<geom::Pose> out;
  out.reserve(steps);
  const double v = p.linear_velocity, w = p.angular_velocity;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = p.dt * static_cast<double>(k);
    const double theta = p.heading + w * t;
    Eigen::Vector2d xy;
    if (std::abs(w) < 1e-12) {
      xy = p.start + v * t * Eigen::Vector2d(std::cos(p.heading), std::sin(p.heading));
    } else {
      const double r = v / w;
      xy = p.start + r * Eigen::Vector2d(std::sin(theta) - std::sin(p.heading),
                                         std::cos(p.heading) - std::cos(theta));
    }
    geom::Pose pose;
    pose.rotation = planar_rotation(theta);
    pose.translation = {xy.x(), xy.y(), p.camera_height};
    pose.timestamp = t;
    out.push_back(pose);
  }
  return out;
}

void SplineParams::validate() const {
  if (waypoints.size() < 2) throw ValidationError("spline needs at least 2 waypoints");
  for (const auto& w : waypoints)
    if (!w.allFinite()) throw ValidationError("waypoints must be finite");
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if ((waypoints[i] - waypoints[i - 1]).norm() < 1e-9)
      throw ValidationError("consecutive waypoints coincide");
  if (!(dt > 0.0) || !finite(dt)) throw ValidationError("dt must be positive");
  if (!finite(bank_gain)) throw ValidationError("bank gain must be finite");
}

SplineParams SplineParams::default_course() {
  SplineParams p;
  // Loop of radius ~3 with height swinging between 1.0 and 2.2.
  const int n = 9;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / (n - 1);
    p.waypoints.emplace_back(3.0 * std::cos(a), 2.2 * std::sin(a), 1.6 + 0.6 * std::sin(2.0 * a));
  }
  return p;
}

std::vector<geom::Pose> generate_smooth_6dof(const SplineParams& p, std::size_t steps) {
  require_steps(steps);
  p.validate();
  std::vector<NaturalSpline> axes;
  for (int a = 0; a < 3; ++a) {
    std::vector<double> y;
    for (const auto& w : p.waypoints) y.push_back(w[a]);
    axes.emplace_back(std::move(y));
  }
  const double span = static_cast<double>(p.waypoints.size() - 1);
  std::vector<geom::Pose> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = span * static_cast<double>(k) / static_cast<double>(steps - 1);
    Eigen::Vector3d pos, d1, d2;
    for (int a = 0; a < 3; ++a) {
      const auto e = axes[a].eval(s);
      pos[a] = e[0];
      d1[a] = e[1];
      d2[a] = e[2];
    }
    const double speed = d1.norm();
    if (speed < 1e-12) throw ValidationError("spline tangent vanished");
    const Eigen::Vector3d forward = d1 / speed;
    Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
    if (forward.cross(up).norm() < 1e-6) up = Eigen::Vector3d::UnitY();
    const Eigen::Vector3d right = forward.cross(up).normalized();
    const Eigen::Vector3d down = forward.cross(right);
    Eigen::Matrix3d base;
    base.col(0) = right;
    base.col(1) = down;
    base.col(2) = forward;

    // Lean into turns: roll about the optical axis with lateral curvature.
    const double lateral = d2.dot(right) / (speed * speed);
    const double roll = std::clamp(p.bank_gain * lateral, -0.6, 0.6);
    geom::Pose pose;
    pose.rotation = base * geom::axis_angle(Eigen::Vector3d::UnitZ(), roll);
    pose.translation = pos;
    pose.timestamp = p.dt * static_cast<double>(k);
    out.push_back(pose);
  }
  return out;
}

}  // namespace egoexo::sim
