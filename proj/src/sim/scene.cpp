#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "egoexo/errors.hpp"
#include "egoexo/exo/raster.hpp"
#include "egoexo/geom/transfer.hpp"
#include "egoexo/sim/scene.hpp"

namespace egoexo::sim {
namespace {

constexpr Rgb kBackground{46, 58, 74};
constexpr Rgb kCheckerLight{176, 170, 156};
constexpr Rgb kCheckerDark{98, 94, 88};
constexpr Rgb kTagBlack{12, 12, 12};
constexpr Rgb kTagWhite{245, 245, 245};
constexpr int kLandmarkRadius = 3;

// 6x6 interior bits of the tag surrogate; asymmetric so orientation reads.
constexpr std::uint64_t kTagBits = 0b101100'010011'111010'001101'100110'011001;

Rgb tag_color(double s, double t) {
  // s, t in [0, 1) across the tag; an 8x8 grid with a black border ring.
  const int i = std::clamp(static_cast<int>(s * 8.0), 0, 7);
  const int j = std::clamp(static_cast<int>(t * 8.0), 0, 7);
  if (i == 0 || j == 0 || i == 7 || j == 7) return kTagBlack;
  const int bit = (j - 1) * 6 + (i - 1);
  return (kTagBits >> bit) & 1U ? kTagWhite : kTagBlack;
}

std::uint8_t parse_channel(const std::string& tok, std::size_t lineno) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::logic_error&) {
    throw ParseError("bad color channel '" + tok + "'", lineno);
  }
  if (used != tok.size() || v < 0 || v > 255) throw ParseError("color channel must be 0..255", lineno);
  return static_cast<std::uint8_t>(v);
}

double parse_real(const std::string& tok, std::size_t lineno) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::logic_error&) {
    throw ParseError("not a number: '" + tok + "'", lineno);
  }
  if (used != tok.size() || !std::isfinite(v)) throw ParseError("not a finite number: '" + tok + "'", lineno);
  return v;
}

}  // namespace

std::array<Eigen::Vector3d, 4> SceneTag::corners() const {
  const double h = size / 2.0;
  return {center + Eigen::Vector3d(-h, -h, 0), center + Eigen::Vector3d(h, -h, 0),
          center + Eigen::Vector3d(h, h, 0), center + Eigen::Vector3d(-h, h, 0)};
}

void Scene::validate() const {
  std::set<std::int64_t> ids;
  for (const auto& l : landmarks) {
    if (!l.position.allFinite()) throw ValidationError("landmark position must be finite");
    if (!ids.insert(l.id).second) throw ValidationError("duplicate landmark id " + std::to_string(l.id));
  }
  if (tag && (!(tag->size > 0.0) || !tag->center.allFinite()))
    throw ValidationError("tag size must be positive");
  if (ground_plane && !(checker_size > 0.0)) throw ValidationError("checker size must be positive");
}

Scene parse_scene(std::istream& in) {
  Scene scene;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "tag") {
      if (tok.size() != 5) throw ParseError("tag line needs: tag cx cy cz size", lineno);
      if (scene.tag) throw ParseError("second tag line", lineno);
      SceneTag tag;
      tag.center = {parse_real(tok[1], lineno), parse_real(tok[2], lineno), parse_real(tok[3], lineno)};
      tag.size = parse_real(tok[4], lineno);
      if (!(tag.size > 0)) throw ParseError("tag size must be positive", lineno);
      scene.tag = tag;
      continue;
    }
    if (tok[0] == "ground") {
      if (tok.size() != 3) throw ParseError("ground line needs: ground z checker_size", lineno);
      scene.ground_plane = true;
      scene.ground_z = parse_real(tok[1], lineno);
      scene.checker_size = parse_real(tok[2], lineno);
      if (!(scene.checker_size > 0)) throw ParseError("checker size must be positive", lineno);
      continue;
    }
    if (tok.size() != 7) throw ParseError("landmark line needs: id x y z r g b", lineno);
    Landmark l;
    try {
      std::size_t used = 0;
      l.id = std::stoll(tok[0], &used);
      if (used != tok[0].size()) throw std::invalid_argument(tok[0]);
    } catch (const std::logic_error&) {
      throw ParseError("bad landmark id '" + tok[0] + "'", lineno);
    }
    if (!ids.insert(l.id).second) throw ParseError("duplicate landmark id " + tok[0], lineno);
    l.position = {parse_real(tok[1], lineno), parse_real(tok[2], lineno), parse_real(tok[3], lineno)};
    l.color = {parse_channel(tok[4], lineno), parse_channel(tok[5], lineno), parse_channel(tok[6], lineno)};
    scene.landmarks.push_back(l);
  }
  return scene;
}

Scene read_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene " + path.string());
  try {
    return parse_scene(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_scene(std::ostream& out, const Scene& scene) {
  char buf[256];
  if (scene.ground_plane) {
    std::snprintf(buf, sizeof buf, "ground %.17g %.17g\n", scene.ground_z, scene.checker_size);
    out << buf;
  }
  if (scene.tag) {
    std::snprintf(buf, sizeof buf, "tag %.17g %.17g %.17g %.17g\n", scene.tag->center.x(),
                  scene.tag->center.y(), scene.tag->center.z(), scene.tag->size);
    out << buf;
  }
  for (const auto& l : scene.landmarks) {
    std::snprintf(buf, sizeof buf, "%lld %.17g %.17g %.17g %d %d %d\n", static_cast<long long>(l.id),
                  l.position.x(), l.position.y(), l.position.z(), l.color.r, l.color.g, l.color.b);
    out << buf;
  }
}

void write_scene(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# id x y z r g b\n";
  write_scene(out, scene);
}

Scene make_room_scene(std::size_t count, double half, double height, std::uint64_t seed) {
  if (!(half > 0.0) || !(height > 0.0)) throw ValidationError("room dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> along(-half, half);
  std::uniform_real_distribution<double> up(0.2, height);
  std::uniform_int_distribution<int> surface(0, 4);
  std::uniform_int_distribution<int> channel(60, 255);
  Scene scene;
  scene.ground_plane = true;
  for (std::size_t i = 0; i < count; ++i) {
    Landmark l;
    l.id = static_cast<std::int64_t>(i);
    const int s = surface(rng);
    const double a = along(rng);
    switch (s) {
      case 0: l.position = {half, a, up(rng)}; break;
      case 1: l.position = {-half, a, up(rng)}; break;
      case 2: l.position = {a, half, up(rng)}; break;
      case 3: l.position = {a, -half, up(rng)}; break;
      default: l.position = {a, along(rng), height}; break;
    }
    l.color = {static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
               static_cast<std::uint8_t>(channel(rng))};
    scene.landmarks.push_back(l);
  }
  return scene;
}

std::vector<VisibleLandmark> visible_landmarks(const geom::Pose& pose, const Scene& scene,
                                               const geom::CameraIntrinsics& k) {
  std::vector<Eigen::Vector3d> cam;
  cam.reserve(scene.landmarks.size());
  for (const auto& l : scene.landmarks) cam.push_back(pose.to_camera(l.position));
  std::vector<VisibleLandmark> out;
  for (const auto& px : geom::project_points(cam, k)) {
    if (!(px.u >= 0.0 && px.v >= 0.0 && px.u < k.width && px.v < k.height)) continue;
    out.push_back({scene.landmarks[px.index].id, {px.u, px.v}, px.depth});
  }
  return out;
}

SceneRender render_scene(const geom::Pose& pose, const Scene& scene, const geom::CameraIntrinsics& k) {
  k.validate();
  SceneRender out;
  out.image = RgbImage(k.width, k.height);
  fill(out.image, kBackground);

  const Eigen::Vector3d c = pose.translation;
  const Eigen::Matrix3d& r = pose.rotation;
  const bool floor = scene.ground_plane && c.z() > scene.ground_z;
  const bool tag = scene.tag.has_value();
  if (floor || tag) {
    const double inv_fx = 1.0 / k.fx, inv_fy = 1.0 / k.fy;
    for (int y = 0; y < k.height; ++y) {
      auto* row = out.image.pixel(0, y);
      for (int x = 0; x < k.width; ++x) {
        // Ray through the pixel center.
        const Eigen::Vector3d d = r * Eigen::Vector3d((x - k.cx) * inv_fx, (y - k.cy) * inv_fy, 1.0);
        double best = std::numeric_limits<double>::infinity();
        Rgb color = kBackground;
        if (tag && d.z() != 0.0) {
          const double t = (scene.tag->center.z() - c.z()) / d.z();
          if (t > 0.0) {
            const Eigen::Vector3d hit = c + t * d;
            const double h = scene.tag->size / 2.0;
            const double s = (hit.x() - scene.tag->center.x() + h) / scene.tag->size;
            const double u = (hit.y() - scene.tag->center.y() + h) / scene.tag->size;
            if (s >= 0.0 && s < 1.0 && u >= 0.0 && u < 1.0) {
              best = t;
              color = tag_color(s, u);
            }
          }
        }
        if (floor && d.z() < 0.0) {
          const double t = (scene.ground_z - c.z()) / d.z();
          if (t < best) {
            const Eigen::Vector3d hit = c + t * d;
            const auto gx = static_cast<long long>(std::floor(hit.x() / scene.checker_size));
            const auto gy = static_cast<long long>(std::floor(hit.y() / scene.checker_size));
            color = ((gx + gy) & 1) ? kCheckerDark : kCheckerLight;
          }
        }
        row[3 * x] = color.r;
        row[3 * x + 1] = color.g;
        row[3 * x + 2] = color.b;
      }
    }
  }

  out.landmarks_visible = visible_landmarks(pose, scene, k);
  // Splat every landmark in front of the camera, far to near; ones just
  // off-image still bleed their disk edge in.
  std::vector<Eigen::Vector3d> cam;
  for (const auto& l : scene.landmarks) cam.push_back(pose.to_camera(l.position));
  auto px = geom::project_points(cam, k);
  std::stable_sort(px.begin(), px.end(),
                   [](const geom::PixelPoint& a, const geom::PixelPoint& b) { return a.depth > b.depth; });
  const auto disk = exo::disk_offsets(kLandmarkRadius);
  for (const auto& p : px) {
    if (p.u < -kLandmarkRadius - 1 || p.v < -kLandmarkRadius - 1 || p.u > k.width + kLandmarkRadius ||
        p.v > k.height + kLandmarkRadius)
      continue;
    exo::splat(out.image, static_cast<int>(std::lround(p.u)), static_cast<int>(std::lround(p.v)), disk,
               scene.landmarks[p.index].color);
  }

  if (scene.tag) {
    const auto corners = scene.tag->corners();
    std::array<Eigen::Vector2d, 4> uv;
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d pc = pose.to_camera(corners[i]);
      if (!(pc.z() > geom::kEpsilonDepth)) {
        ok = false;
        break;
      }
      uv[i] = {k.fx * pc.x() / pc.z() + k.cx, k.fy * pc.y() / pc.z() + k.cy};
    }
    if (ok) out.tag_corners = uv;
  }
  return out;
}

}  // namespace egoexo::sim
