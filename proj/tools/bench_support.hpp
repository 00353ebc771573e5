#pragma once

// Measurement routines shared by egoexo_bench and the acceptance suite.

#include <chrono>
#include <cstddef>
#include <memory>
#include <vector>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/point_set.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::bench {

struct Throughput {
  std::size_t views = 0;
  double seconds = 0.0;
  double views_per_second() const { return seconds > 0 ? views / seconds : 0.0; }
  double mean_ms() const { return views ? 1000.0 * seconds / views : 0.0; }
};

/// Fills a buffer from a rendered simulation, then times synthesize_exo
/// back to back on one thread, cycling f over 1..buffer size.
inline Throughput measure_synthesis(const geom::Point3Set& cloud, const geom::CameraIntrinsics& k,
                                    std::size_t views, std::size_t frames = 120, std::size_t distinct_images = 8) {
  sim::SimulationParams p;
  p.steps = frames;
  p.intrinsics = k;
  p.landmarks = 100;
  p.render_images = false;
  const auto truth = sim::simulation_trajectory(p);
  // A handful of real renders, reused, keeps setup cheap without blank frames.
  const auto scene = sim::make_room_scene(p.landmarks, p.room_half_extent, p.room_height, p.scene_seed);
  std::vector<std::shared_ptr<const RgbImage>> images;
  for (std::size_t i = 0; i < distinct_images; ++i)
    images.push_back(std::make_shared<const RgbImage>(sim::render_scene(truth[i * frames / distinct_images], scene, k).image));

  buffer::PoseBuffer buf({100, 0.001}, k.width, k.height);
  for (std::size_t i = 0; i < truth.size(); ++i) buf.offer(truth[i], images[i % images.size()]);
  const auto snap = buf.snapshot();
  exo::RenderConfig cfg;
  cfg.point_radius = exo::RenderConfig::default_point_radius(k);

  exo::synthesize_exo(snap, 1, cloud, k, cfg);  // warm caches
  Throughput t;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t sink = 0;
  for (std::size_t i = 0; i < views; ++i) {
    const long long f = 1 + static_cast<long long>(i % (snap.size() - 1));
    sink += exo::synthesize_exo(snap, f, cloud, k, cfg).overlay_pixel_count;
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.views = views;
  if (sink == 0) t.views = 0;  // nothing drawn means the measurement is meaningless
  return t;
}

struct MemoryPoint {
  std::size_t capacity = 0;
  double megabytes = 0.0;
};

struct MemoryFit {
  std::vector<MemoryPoint> points;
  double slope_mb_per_frame = 0.0;
  double intercept_mb = 0.0;
  double r_squared = 0.0;
};

/// Buffer memory (PoseBuffer::memory_bytes) after filling each capacity
/// with distinct frames, and a least-squares line through the results.
inline MemoryFit measure_buffer_memory(const std::vector<std::size_t>& capacities, const geom::CameraIntrinsics& k) {
  MemoryFit fit;
  for (const std::size_t n : capacities) {
    buffer::PoseBuffer buf({n, 0.001}, k.width, k.height);
    for (std::size_t i = 0; i < n; ++i) {
      geom::Pose p;
      p.translation = {0.01 * static_cast<double>(i), 0.0, 0.0};
      buf.offer(p, std::make_shared<const RgbImage>(k.width, k.height));
    }
    fit.points.push_back({n, static_cast<double>(buf.memory_bytes()) / 1e6});
  }
  const double m = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : fit.points) {
    const double x = static_cast<double>(p.capacity), y = p.megabytes;
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
  }
  const double cov = sxy - sx * sy / m, vx = sxx - sx * sx / m, vy = syy - sy * sy / m;
  fit.slope_mb_per_frame = cov / vx;
  fit.intercept_mb = (sy - fit.slope_mb_per_frame * sx) / m;
  fit.r_squared = vy > 0 ? cov * cov / (vx * vy) : 1.0;
  return fit;
}

}  // namespace egoexo::bench
