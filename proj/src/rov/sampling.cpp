#include "egoexo/rov/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "egoexo/errors.hpp"

namespace egoexo::rov {

geom::Point3Set sample_point_cloud(const TriangleMesh& mesh, long long m, std::uint64_t seed,
                                   const SampleColors& colors) {
  if (m <= 0) throw ValidationError("sample count must be positive");
  if (mesh.triangles.empty()) throw NoDataError("cannot sample an empty mesh");
  mesh.validate();

  std::vector<double> areas(mesh.triangles.size());
  for (std::size_t i = 0; i < areas.size(); ++i) areas[i] = mesh.triangle_area(i);

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick_face(areas.begin(), areas.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  geom::Point3Set out;
  out.points.reserve(static_cast<std::size_t>(m));
  std::vector<Rgb> rgb;
  rgb.reserve(static_cast<std::size_t>(m));

  for (long long i = 0; i < m; ++i) {
    const auto& tri = mesh.triangles[pick_face(rng)];
    const double s = std::sqrt(unit(rng));
    const double r2 = unit(rng);
    const double w0 = 1.0 - s;
    const double w1 = s * (1.0 - r2);
    const double w2 = s * r2;
    out.points.push_back(w0 * mesh.vertices[tri[0]] + w1 * mesh.vertices[tri[1]] +
                         w2 * mesh.vertices[tri[2]]);
    if (mesh.vertex_colors) {
      const auto& vc = *mesh.vertex_colors;
      auto mix = [&](auto channel) {
        const double v = w0 * channel(vc[tri[0]]) + w1 * channel(vc[tri[1]]) + w2 * channel(vc[tri[2]]);
        return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      };
      rgb.push_back({mix([](Rgb c) { return c.r; }), mix([](Rgb c) { return c.g; }),
                     mix([](Rgb c) { return c.b; })});
    } else {
      rgb.push_back(colors.body);
    }
  }

  if (!mesh.vertex_colors) {
    std::vector<double> xs;
    xs.reserve(out.points.size());
    for (const auto& p : out.points) xs.push_back(p.x());
    const std::size_t k = xs.size() - std::max<std::size_t>(1, xs.size() / 10);
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
    const double front = xs[k];
    for (std::size_t i = 0; i < out.points.size(); ++i)
      if (out.points[i].x() >= front) rgb[i] = colors.accent;
  }
  out.colors = std::move(rgb);
  return out;
}

Eigen::Matrix3d ModelMount::model_to_camera_axes() {
  // Columns are the model axes written in camera coordinates:
  // forward -> +z, left -> -x, up -> -y.
  Eigen::Matrix3d r;
  r << 0.0, -1.0, 0.0,
       0.0, 0.0, -1.0,
       1.0, 0.0, 0.0;
  return r;
}

geom::Point3Set mount_in_camera_frame(const geom::Point3Set& model_cloud, const ModelMount& mount) {
  geom::Point3Set out;
  out.points.reserve(model_cloud.size());
  for (const auto& p : model_cloud.points)
    out.points.push_back(mount.scale * (mount.rotation * p) + mount.offset);
  out.colors = model_cloud.colors;
  return out;
}

}  // namespace egoexo::rov
