#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "egoexo/validation/reprojection.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::validation {

/// Pools reprojection errors over many current frames. A single current
/// frame gives a noisy curve; sliding the current frame along a long run and
/// pooling makes the drift trend stable.
class DriftAccumulator {
 public:
  explicit DriftAccumulator(std::vector<long long> f_values);

  /// Evaluates every f that fits the snapshot without clamping.
  void observe(const buffer::BufferSnapshot& snapshot, const AnnotationSet& annotations,
               const geom::CameraIntrinsics& intrinsics, const exo::RenderConfig& cfg);

  /// Pooled mean/max over all point errors seen per f.
  ErrorCurve curve() const;
  std::size_t frames_observed() const noexcept { return frames_; }

 private:
  struct Tally {
    double sum = 0.0;
    double max = 0.0;
    std::size_t count = 0;
  };
  std::vector<long long> f_values_;
  std::vector<Tally> tallies_;
  std::size_t frames_ = 0;
};

struct DriftStudyParams {
  sim::SimulationParams simulation;
  std::vector<long long> f_values{70, 140, 200, 260};
  exo::RenderConfig render;
  double pose_threshold = 0.001;
  /// Buffer capacity; 0 sizes it to max(f) + 1 so no f is clamped.
  std::size_t capacity = 0;

  /// A slow planar run through the landmark room, long enough for the
  /// largest f to be evaluated at many current frames.
  static DriftStudyParams planar_defaults();
};

struct DriftStudyResult {
  ErrorCurve curve;
  std::size_t frames_admitted = 0;
  std::size_t frames_evaluated = 0;
};

/// Drives a SimulatedSource through pose_buffer, annotating every admitted
/// frame with its visible landmarks, and pools errors along the run.
DriftStudyResult run_drift_study(const DriftStudyParams& params);

}  // namespace egoexo::validation
