#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/pose.hpp"

namespace egoexo::validation {

/// Known reference points for one admitted frame.
struct ReferenceAnnotation {
  std::uint64_t frame_seq = 0;
  std::vector<Eigen::Vector2d> points_2d;
  std::optional<std::vector<Eigen::Vector3d>> points_3d;  // world
  /// Landmark ids parallel to points_2d; may be empty.
  std::vector<std::int64_t> ids;
  std::string tag;
  /// Ground-truth camera pose of this frame, when known.
  std::optional<geom::Pose> camera_pose;

  /// Throws ValidationError on mismatched lengths or out-of-bounds points.
  void validate(const geom::CameraIntrinsics& intrinsics) const;
};

/// Annotations keyed by frame seq.
class AnnotationSet {
 public:
  void add(ReferenceAnnotation a);
  const ReferenceAnnotation* find(std::uint64_t seq) const;
  /// Drops annotations for frames older than `seq`.
  void forget_before(std::uint64_t seq);
  std::size_t size() const noexcept { return by_seq_.size(); }

 private:
  std::unordered_map<std::uint64_t, ReferenceAnnotation> by_seq_;
};

struct ReprojectionResult {
  /// True when no annotated point could be evaluated in the reference frame.
  bool empty = true;
  double mean = 0.0;
  double max = 0.0;
  std::vector<double> per_point;
  std::vector<std::int64_t> ids;  // parallel to per_point when ids are known
  std::uint64_t reference_seq = 0;
  std::uint64_t current_seq = 0;
  bool clamped = false;
  /// Annotated points that landed behind the estimated reference camera.
  std::size_t culled = 0;
};

/// Pixel error of the overlay geometry at EOB distance f.
///
/// Each annotated world point X of the reference frame is expressed in the
/// current camera with the current frame's ground-truth pose (its annotation's
/// camera_pose, else the buffered pose), carried current -> reference with the
/// buffered poses exactly as synthesize_exo does, projected, and compared
/// with its annotated pixel. With exact poses the error is zero; with drifting
/// estimates it measures the drift accumulated between the two frames.
ReprojectionResult reprojection_error(const buffer::BufferSnapshot& snapshot,
                                      const AnnotationSet& annotations, long long f,
                                      const geom::CameraIntrinsics& intrinsics,
                                      const exo::RenderConfig& cfg);

struct ErrorSample {
  long long f = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  std::size_t count = 0;  // 0 marks an empty sample
};

struct ErrorCurve {
  std::vector<ErrorSample> samples;

  /// Throws ValidationError unless f strictly increases.
  void validate() const;
};

/// f_values must be non-empty and strictly increasing.
ErrorCurve sweep_eob(const buffer::BufferSnapshot& snapshot, const AnnotationSet& annotations,
                     std::span<const long long> f_values, const geom::CameraIntrinsics& intrinsics,
                     const exo::RenderConfig& cfg);

/// `f,mean_error_px,max_error_px,count`, %.6g floats, empty samples as nan.
void write_csv(std::ostream& out, const ErrorCurve& curve);

/// Kendall's tau between f and mean error over non-empty samples; 1 means
/// error rises with every step back in time. nullopt with < 2 samples.
std::optional<double> monotone_trend(const ErrorCurve& curve);

/// Parses "70,140,200,260"; throws ValidationError on junk, f < 1 or a
/// non-increasing list.
std::vector<long long> parse_f_list(const std::string& text);

}  // namespace egoexo::validation
