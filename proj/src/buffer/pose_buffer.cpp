#include "egoexo/buffer/pose_buffer.hpp"

#include <atomic>
#include <cmath>

#include "egoexo/errors.hpp"

namespace egoexo::buffer {

void BufferConfig::validate() const {
  if (capacity < 2) throw ValidationError("buffer capacity must be at least 2");
  if (!(pose_threshold >= 0.0) || !std::isfinite(pose_threshold))
    throw ValidationError("pose threshold must be finite and non-negative");
}

ReferenceSelection select_reference(const BufferSnapshot& snapshot, long long eob_distance) {
  if (eob_distance < 1) throw ValidationError("EOB distance must be at least 1");
  if (snapshot.empty()) throw NoDataError("no frames buffered");
  const auto newest = static_cast<long long>(snapshot.size()) - 1;
  ReferenceSelection sel;
  if (eob_distance > newest) {
    sel.index = 0;
    sel.clamped = true;
  } else {
    sel.index = static_cast<std::size_t>(newest - eob_distance);
  }
  sel.record = snapshot[sel.index];
  return sel;
}

PoseBuffer::PoseBuffer(BufferConfig config, int image_width, int image_height)
    : config_(config), width_(image_width), height_(image_height) {
  config_.validate();
  if (width_ <= 0 || height_ <= 0) throw ValidationError("buffer image size must be positive");
  std::atomic_store(&published_, std::make_shared<const std::vector<FrameRecord>>());
}

OfferOutcome PoseBuffer::offer(const geom::Pose& pose, std::shared_ptr<const RgbImage> image) {
  pose.validate();
  if (!image) throw ValidationError("frame has no image");
  if (image->width() != width_ || image->height() != height_)
    throw ValidationError("frame image size does not match the configured intrinsics");

  if (last_admitted_t_ &&
      (pose.translation - *last_admitted_t_).norm() < config_.pose_threshold)
    return {OfferResult::rejected_static, std::nullopt};

  const std::uint64_t seq = next_seq_++;
  records_.push_back(FrameRecord{pose, std::move(image), seq});
  if (records_.size() > config_.capacity) records_.pop_front();
  last_admitted_t_ = pose.translation;

  auto next = std::make_shared<const std::vector<FrameRecord>>(records_.begin(), records_.end());
  std::atomic_store(&published_, std::shared_ptr<const std::vector<FrameRecord>>(std::move(next)));
  return {OfferResult::admitted, seq};
}

BufferSnapshot PoseBuffer::snapshot() const { return BufferSnapshot(std::atomic_load(&published_)); }

std::size_t PoseBuffer::size() const { return records_.size(); }

std::size_t PoseBuffer::memory_bytes() const {
  std::size_t bytes = 0;
  for (const auto& r : records_) {
    bytes += sizeof(FrameRecord) + sizeof(RgbImage);
    if (r.image) bytes += r.image->size_bytes();
  }
  return bytes;
}

}  // namespace egoexo::buffer
