#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "egoexo/geom/pose.hpp"
#include "egoexo/image.hpp"

namespace egoexo::buffer {

/// One admitted (pose, egocentric image) pair.
struct FrameRecord {
  geom::Pose pose;
  std::shared_ptr<const RgbImage> image;
  /// Admission counter, assigned by the buffer: 0, 1, 2, ... with no gaps.
  std::uint64_t seq = 0;
};

struct BufferConfig {
  std::size_t capacity = 100;
  /// Minimum camera-center displacement (SLAM units) from the last admitted
  /// frame for a new frame to be admitted.
  double pose_threshold = 0.001;

  void validate() const;
};

enum class OfferResult { admitted, rejected_static };

struct OfferOutcome {
  OfferResult result = OfferResult::rejected_static;
  std::optional<std::uint64_t> seq;

  bool admitted() const noexcept { return result == OfferResult::admitted; }
};

/// Immutable point-in-time view of the buffer, oldest record first.
class BufferSnapshot {
 public:
  BufferSnapshot() = default;
  explicit BufferSnapshot(std::shared_ptr<const std::vector<FrameRecord>> records)
      : records_(std::move(records)) {}

  std::size_t size() const noexcept { return records_ ? records_->size() : 0; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const FrameRecord> records() const noexcept {
    if (!records_) return {};
    return *records_;
  }
  const FrameRecord& operator[](std::size_t i) const { return (*records_)[i]; }

  /// Newest record (the current frame c), if any.
  const FrameRecord* current() const noexcept {
    return empty() ? nullptr : &records_->back();
  }
  std::optional<std::uint64_t> current_seq() const noexcept {
    if (empty()) return std::nullopt;
    return records_->back().seq;
  }

 private:
  std::shared_ptr<const std::vector<FrameRecord>> records_;
};

struct ReferenceSelection {
  FrameRecord record;
  /// 0-based position in the snapshot, oldest first.
  std::size_t index = 0;
  /// True when the requested distance reached past the oldest record.
  bool clamped = false;
};

/// The record `eob_distance` admitted frames before the newest one, or the
/// oldest record (clamped) when the buffer is not that deep.
///
/// Throws ValidationError for eob_distance < 1 and NoDataError on an empty
/// snapshot.
ReferenceSelection select_reference(const BufferSnapshot& snapshot, long long eob_distance);

/// Bounded FIFO of admitted frames with displacement-threshold admission.
///
/// One thread calls offer(); any number of threads may call snapshot(). A
/// snapshot is published as a fresh immutable vector on every admission, so
/// readers never observe a partially updated buffer and never wait on
/// admission work. Images are shared, not copied.
class PoseBuffer {
 public:
  PoseBuffer(BufferConfig config, int image_width, int image_height);

  /// Throws ValidationError if the pose is invalid, the image is missing, or
  /// its size differs from the configured one.
  OfferOutcome offer(const geom::Pose& pose, std::shared_ptr<const RgbImage> image);

  BufferSnapshot snapshot() const;

  std::size_t size() const;
  std::uint64_t total_admitted() const noexcept { return next_seq_; }
  const BufferConfig& config() const noexcept { return config_; }

  /// Heap bytes held by the records currently in the buffer: image pixel
  /// storage plus per-record bookkeeping.
  std::size_t memory_bytes() const;

 private:
  BufferConfig config_;
  int width_;
  int height_;
  std::deque<FrameRecord> records_;
  std::uint64_t next_seq_ = 0;
  std::optional<Eigen::Vector3d> last_admitted_t_;
  std::shared_ptr<const std::vector<FrameRecord>> published_;
};

}  // namespace egoexo::buffer
