#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "egoexo/errors.hpp"
#include "egoexo/imageio/codec.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::sim {
namespace {

struct TimedImage {
  double ts = 0.0;
  std::filesystem::path path;
};

bool is_image(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<TimedImage> scan_directory(const std::filesystem::path& dir) {
  std::vector<TimedImage> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_image(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    std::size_t used = 0;
    double ts = 0.0;
    try {
      ts = std::stod(stem, &used);
    } catch (const std::logic_error&) {
      continue;  // not named by timestamp
    }
    if (used != stem.size() || !std::isfinite(ts)) continue;
    out.push_back({ts, entry.path()});
  }
  std::sort(out.begin(), out.end(), [](const TimedImage& a, const TimedImage& b) { return a.ts < b.ts; });
  return out;
}

std::vector<TimedImage> read_associations(const std::filesystem::path& file,
                                          const std::filesystem::path& image_dir) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open associations " + file.string());
  std::vector<TimedImage> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string ts_tok, name, extra;
    if (!(ss >> ts_tok)) continue;
    if (!(ss >> name) || (ss >> extra)) throw ParseError("expected: pose_timestamp image_file", lineno);
    double ts = 0.0;
    try {
      std::size_t used = 0;
      ts = std::stod(ts_tok, &used);
      if (used != ts_tok.size()) throw std::invalid_argument(ts_tok);
    } catch (const std::logic_error&) {
      throw ParseError("bad timestamp '" + ts_tok + "'", lineno);
    }
    out.push_back({ts, image_dir / name});
  }
  std::sort(out.begin(), out.end(), [](const TimedImage& a, const TimedImage& b) { return a.ts < b.ts; });
  return out;
}

// Nearest entry by timestamp; ties go to the earlier one.
const TimedImage* nearest(const std::vector<TimedImage>& images, double ts) {
  if (images.empty()) return nullptr;
  auto it = std::lower_bound(images.begin(), images.end(), ts,
                             [](const TimedImage& a, double t) { return a.ts < t; });
  const TimedImage* best = nullptr;
  if (it != images.end()) best = &*it;
  if (it != images.begin()) {
    const TimedImage* prev = &*std::prev(it);
    if (!best || std::abs(prev->ts - ts) <= std::abs(best->ts - ts)) best = prev;
  }
  return best;
}

}  // namespace

ReplaySource::ReplaySource(const std::filesystem::path& trajectory, const std::filesystem::path& image_dir,
                           const ReplayOptions& options) {
  if (!(options.tolerance >= 0.0)) throw ValidationError("pairing tolerance must be >= 0");
  if (!std::filesystem::is_directory(image_dir)) throw Error("not a directory: " + image_dir.string());
  const TrajectoryFile traj = read_trajectory(trajectory);
  normalized_ = traj.normalized_quaternions;

  std::optional<std::filesystem::path> assoc = options.associations;
  if (!assoc && std::filesystem::exists(image_dir / "associations.txt")) assoc = image_dir / "associations.txt";
  const auto images = assoc ? read_associations(*assoc, image_dir) : scan_directory(image_dir);

  for (const auto& pose : traj.poses) {
    const TimedImage* img = nearest(images, pose.timestamp);
    if (!img || std::abs(img->ts - pose.timestamp) > options.tolerance) {
      ++unmatched_;
      continue;
    }
    pairs_.push_back({pose, img->path, img->ts});
  }
  if (pairs_.empty()) throw NoDataError("no pose could be paired with an image in " + image_dir.string());
}

std::optional<PoseSourceEvent> ReplaySource::next() {
  if (cursor_ >= pairs_.size()) return std::nullopt;
  const ReplayPair& p = pairs_[cursor_++];
  PoseSourceEvent ev;
  ev.pose = p.pose;
  ev.image = std::make_shared<const RgbImage>(imageio::read_image(p.image));
  return ev;
}

}  // namespace egoexo::sim
