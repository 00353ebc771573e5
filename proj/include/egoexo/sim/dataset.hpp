#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "egoexo/sim/source.hpp"

namespace egoexo::sim {

struct RecordSummary {
  std::size_t events = 0;
  std::filesystem::path trajectory;
  std::filesystem::path image_dir;
};

/// Drains `source` into a replayable dataset:
///   <dir>/trajectory.txt          poses as emitted
///   <dir>/groundtruth.txt         ground truth, when the source has it
///   <dir>/images/<ts>.png         one image per event
/// Image names use the timestamp with 6 decimals.
RecordSummary record_dataset(PoseSource& source, const std::filesystem::path& dir);

std::string timestamp_filename(double timestamp, const char* extension = ".png");

struct DatasetCheck {
  std::size_t poses = 0;
  std::size_t paired = 0;
  std::size_t unmatched = 0;
  std::size_t normalized_quaternions = 0;
  std::size_t unreadable_images = 0;
  int width = 0;
  int height = 0;
  bool consistent_size = true;
  double max_pair_gap = 0.0;
};

/// Pairs and decodes every image without serving anything.
DatasetCheck check_dataset(const std::filesystem::path& trajectory,
                           const std::filesystem::path& image_dir, const ReplayOptions& options = {});

}  // namespace egoexo::sim
