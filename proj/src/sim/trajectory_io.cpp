#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "egoexo/errors.hpp"
#include "egoexo/sim/trajectory.hpp"

namespace egoexo::sim {

TrajectoryFile parse_trajectory(std::istream& in) {
  TrajectoryFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    double v[8];
    int n = 0;
    std::string tok;
    while (ss >> tok) {
      if (n == 8) throw ParseError("expected 8 fields, found more", lineno);
      try {
        std::size_t used = 0;
        v[n] = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError("not a number: '" + tok + "'", lineno);
      }
      if (!std::isfinite(v[n])) throw ParseError("non-finite value", lineno);
      ++n;
    }
    if (n == 0) continue;
    if (n != 8) throw ParseError("expected 8 fields (ts tx ty tz qx qy qz qw), found " + std::to_string(n), lineno);
    if (v[0] < 0) throw ParseError("negative timestamp", lineno);

    Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    const double norm = q.norm();
    if (norm < 1e-12) throw ParseError("zero quaternion", lineno);
    if (std::abs(norm - 1.0) > 1e-6) ++out.normalized_quaternions;
    q.coeffs() /= norm;
    out.poses.push_back(geom::Pose::from_quaternion({v[1], v[2], v[3]}, q, v[0]));
  }
  std::stable_sort(out.poses.begin(), out.poses.end(),
                   [](const geom::Pose& a, const geom::Pose& b) { return a.timestamp < b.timestamp; });
  return out;
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trajectory " + path.string());
  try {
    return parse_trajectory(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_trajectory(std::ostream& out, std::span<const geom::Pose> poses) {
  char buf[256];
  for (const auto& p : poses) {
    const auto q = p.quaternion();
    std::snprintf(buf, sizeof buf, "%.9f %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", p.timestamp,
                  p.translation.x(), p.translation.y(), p.translation.z(), q.x(), q.y(), q.z(), q.w());
    out << buf;
  }
}

void write_trajectory(const std::filesystem::path& path, std::span<const geom::Pose> poses) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# timestamp tx ty tz qx qy qz qw\n";
  write_trajectory(out, poses);
}

}  // namespace egoexo::sim
