#include "egoexo/validation/drift_study.hpp"

#include <algorithm>
#include <limits>

#include "egoexo/errors.hpp"

namespace egoexo::validation {

DriftAccumulator::DriftAccumulator(std::vector<long long> f_values)
    : f_values_(std::move(f_values)), tallies_(f_values_.size()) {
  if (f_values_.empty()) throw ValidationError("drift study needs at least one f");
  for (std::size_t i = 0; i < f_values_.size(); ++i) {
    if (f_values_[i] < 1) throw ValidationError("f must be >= 1");
    if (i > 0 && f_values_[i] <= f_values_[i - 1]) throw ValidationError("f values must strictly increase");
  }
}

void DriftAccumulator::observe(const buffer::BufferSnapshot& snapshot, const AnnotationSet& annotations,
                               const geom::CameraIntrinsics& intrinsics, const exo::RenderConfig& cfg) {
  bool any = false;
  for (std::size_t i = 0; i < f_values_.size(); ++i) {
    if (static_cast<long long>(snapshot.size()) <= f_values_[i]) continue;
    const auto r = reprojection_error(snapshot, annotations, f_values_[i], intrinsics, cfg);
    any = true;
    for (const double e : r.per_point) {
      tallies_[i].sum += e;
      tallies_[i].max = std::max(tallies_[i].max, e);
      ++tallies_[i].count;
    }
  }
  frames_ += any;
}

ErrorCurve DriftAccumulator::curve() const {
  ErrorCurve c;
  for (std::size_t i = 0; i < f_values_.size(); ++i) {
    const Tally& t = tallies_[i];
    if (t.count == 0) {
      c.samples.push_back({f_values_[i], std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN(), 0});
    } else {
      c.samples.push_back({f_values_[i], t.sum / static_cast<double>(t.count), t.max, t.count});
    }
  }
  return c;
}

DriftStudyParams DriftStudyParams::planar_defaults() {
  DriftStudyParams p;
  auto& s = p.simulation;
  s.kind = sim::TrajectoryKind::planar_2dof;
  s.steps = 1500;
  s.landmarks = 200;
  s.render_images = false;
  s.noise = {0.005, 0.0, 1};
  // 0.005 units per step on a circle of radius 1.5 around the room center.
  s.planar.linear_velocity = 0.005;
  s.planar.angular_velocity = 0.005 / 1.5;
  s.planar.dt = 1.0;
  s.planar.start = {0.0, -1.5};
  s.planar.heading = 0.0;
  s.planar.camera_height = 1.0;
  return p;
}

DriftStudyResult run_drift_study(const DriftStudyParams& params) {
  if (params.f_values.empty()) throw ValidationError("drift study needs at least one f");
  const long long max_f = *std::max_element(params.f_values.begin(), params.f_values.end());
  const std::size_t capacity =
      params.capacity ? params.capacity : std::max<std::size_t>(2, static_cast<std::size_t>(max_f) + 1);
  const auto& k = params.simulation.intrinsics;

  buffer::PoseBuffer buf({capacity, params.pose_threshold}, k.width, k.height);
  sim::SimulatedSource source(params.simulation);
  AnnotationSet annotations;
  DriftAccumulator acc(params.f_values);
  DriftStudyResult out;

  while (auto ev = source.next()) {
    const auto outcome = buf.offer(ev->pose, ev->image);
    if (!outcome.admitted()) continue;
    ++out.frames_admitted;
    const std::uint64_t seq = *outcome.seq;

    ReferenceAnnotation a;
    a.frame_seq = seq;
    a.tag = "landmarks";
    a.camera_pose = ev->ground_truth;
    std::vector<Eigen::Vector3d> world;
    for (std::size_t i = 0; i < ev->landmarks_visible->size(); ++i) {
      const auto& v = (*ev->landmarks_visible)[i];
      a.points_2d.push_back(v.pixel);
      a.ids.push_back(v.id);
      world.push_back((*ev->map_points)[i].position);
    }
    a.points_3d = std::move(world);
    annotations.add(std::move(a));
    if (seq + 1 > capacity) annotations.forget_before(seq + 1 - capacity);

    const auto snap = buf.snapshot();
    acc.observe(snap, annotations, k, params.render);
  }
  out.curve = acc.curve();
  out.frames_evaluated = acc.frames_observed();
  return out;
}

}  // namespace egoexo::validation
