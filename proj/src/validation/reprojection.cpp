#include "egoexo/validation/reprojection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "egoexo/errors.hpp"

namespace egoexo::validation {

void ReferenceAnnotation::validate(const geom::CameraIntrinsics& k) const {
  if (points_3d && points_3d->size() != points_2d.size())
    throw ValidationError("annotation 2d/3d point counts differ");
  if (!ids.empty() && ids.size() != points_2d.size())
    throw ValidationError("annotation id count differs from point count");
  for (const auto& p : points_2d)
    if (!(p.x() >= 0 && p.y() >= 0 && p.x() < k.width && p.y() < k.height))
      throw ValidationError("annotated point outside the image");
  if (camera_pose) camera_pose->validate();
}

void AnnotationSet::add(ReferenceAnnotation a) {
  const auto seq = a.frame_seq;
  by_seq_.insert_or_assign(seq, std::move(a));
}

const ReferenceAnnotation* AnnotationSet::find(std::uint64_t seq) const {
  const auto it = by_seq_.find(seq);
  return it == by_seq_.end() ? nullptr : &it->second;
}

void AnnotationSet::forget_before(std::uint64_t seq) {
  std::erase_if(by_seq_, [seq](const auto& kv) { return kv.first < seq; });
}

ReprojectionResult reprojection_error(const buffer::BufferSnapshot& snapshot, const AnnotationSet& annotations,
                                      long long f, const geom::CameraIntrinsics& intrinsics,
                                      const exo::RenderConfig& cfg) {
  const auto sel = buffer::select_reference(snapshot, f);
  const buffer::FrameRecord& cur = *snapshot.current();
  ReprojectionResult out;
  out.reference_seq = sel.record.seq;
  out.current_seq = cur.seq;
  out.clamped = sel.clamped;

  const ReferenceAnnotation* ref = annotations.find(sel.record.seq);
  if (!ref || ref->points_2d.empty()) return out;
  if (!ref->points_3d) throw ValidationError("reprojection needs 3D reference points");

  const ReferenceAnnotation* cur_ann = annotations.find(cur.seq);
  const geom::Pose& cur_truth = cur_ann && cur_ann->camera_pose ? *cur_ann->camera_pose : cur.pose;

  std::vector<Eigen::Vector3d> in_current;
  in_current.reserve(ref->points_3d->size());
  for (const auto& X : *ref->points_3d) in_current.push_back(cur_truth.to_camera(X));
  const auto projected = exo::project_into_reference(sel.record.pose, cur.pose, in_current, intrinsics, cfg);

  out.culled = in_current.size() - projected.size();
  if (projected.empty()) return out;
  out.empty = false;
  double sum = 0.0;
  for (const auto& px : projected) {
    const double e = (Eigen::Vector2d(px.u, px.v) - ref->points_2d[px.index]).norm();
    out.per_point.push_back(e);
    if (!ref->ids.empty()) out.ids.push_back(ref->ids[px.index]);
    sum += e;
    out.max = std::max(out.max, e);
  }
  out.mean = sum / static_cast<double>(projected.size());
  return out;
}

void ErrorCurve::validate() const {
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].f <= samples[i - 1].f) throw ValidationError("error curve f values must strictly increase");
}

ErrorCurve sweep_eob(const buffer::BufferSnapshot& snapshot, const AnnotationSet& annotations,
                     std::span<const long long> f_values, const geom::CameraIntrinsics& intrinsics,
                     const exo::RenderConfig& cfg) {
  if (f_values.empty()) throw ValidationError("sweep needs at least one f");
  ErrorCurve curve;
  for (const long long f : f_values) {
    const auto r = reprojection_error(snapshot, annotations, f, intrinsics, cfg);
    ErrorSample s{f, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), 0};
    if (!r.empty) s = {f, r.mean, r.max, r.per_point.size()};
    curve.samples.push_back(s);
  }
  curve.validate();
  return curve;
}

void write_csv(std::ostream& out, const ErrorCurve& curve) {
  out << "f,mean_error_px,max_error_px,count\n";
  char buf[128];
  for (const auto& s : curve.samples) {
    if (s.count == 0)
      std::snprintf(buf, sizeof buf, "%lld,nan,nan,0\n", s.f);
    else
      std::snprintf(buf, sizeof buf, "%lld,%.6g,%.6g,%zu\n", s.f, s.mean_error, s.max_error, s.count);
    out << buf;
  }
}

std::optional<double> monotone_trend(const ErrorCurve& curve) {
  std::vector<const ErrorSample*> xs;
  for (const auto& s : curve.samples)
    if (s.count > 0) xs.push_back(&s);
  if (xs.size() < 2) return std::nullopt;
  long long score = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double df = static_cast<double>(xs[j]->f - xs[i]->f);
      const double de = xs[j]->mean_error - xs[i]->mean_error;
      score += (df * de > 0) - (df * de < 0);
    }
  const double pairs = static_cast<double>(xs.size() * (xs.size() - 1) / 2);
  return static_cast<double>(score) / pairs;
}

std::vector<long long> parse_f_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::logic_error&) {
      throw ValidationError("bad f value '" + tok + "'");
    }
    if (used != tok.size()) throw ValidationError("bad f value '" + tok + "'");
    if (v < 1) throw ValidationError("f must be >= 1");
    if (!out.empty() && v <= out.back()) throw ValidationError("f values must strictly increase");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty f list");
  return out;
}

}  // namespace egoexo::validation
