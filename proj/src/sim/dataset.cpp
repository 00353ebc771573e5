#include <cmath>
#include <cstdio>

#include "egoexo/errors.hpp"
#include "egoexo/imageio/codec.hpp"
#include "egoexo/sim/dataset.hpp"

namespace egoexo::sim {

std::string timestamp_filename(double timestamp, const char* extension) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%s", timestamp, extension);
  return buf;
}

RecordSummary record_dataset(PoseSource& source, const std::filesystem::path& dir) {
  RecordSummary out;
  out.image_dir = dir / "images";
  out.trajectory = dir / "trajectory.txt";
  std::filesystem::create_directories(out.image_dir);

  std::vector<geom::Pose> poses, truth;
  bool all_truth = true;
  while (auto ev = source.next()) {
    if (!ev->image) throw ValidationError("event without an image cannot be recorded");
    imageio::write_png(out.image_dir / timestamp_filename(ev->pose.timestamp), *ev->image);
    poses.push_back(ev->pose);
    if (ev->ground_truth)
      truth.push_back(*ev->ground_truth);
    else
      all_truth = false;
    ++out.events;
  }
  write_trajectory(out.trajectory, poses);
  if (all_truth && !truth.empty()) write_trajectory(dir / "groundtruth.txt", truth);
  return out;
}

DatasetCheck check_dataset(const std::filesystem::path& trajectory, const std::filesystem::path& image_dir,
                           const ReplayOptions& options) {
  ReplaySource src(trajectory, image_dir, options);
  DatasetCheck out;
  out.paired = src.pairs().size();
  out.unmatched = src.unmatched_poses();
  out.poses = out.paired + out.unmatched;
  out.normalized_quaternions = src.normalized_quaternions();
  for (const auto& p : src.pairs()) {
    out.max_pair_gap = std::max(out.max_pair_gap, std::abs(p.image_timestamp - p.pose.timestamp));
    RgbImage img;
    try {
      img = imageio::read_image(p.image);
    } catch (const Error&) {
      ++out.unreadable_images;
      continue;
    }
    if (out.width == 0) {
      out.width = img.width();
      out.height = img.height();
    } else if (img.width() != out.width || img.height() != out.height) {
      out.consistent_size = false;
    }
  }
  return out;
}

}  // namespace egoexo::sim
