#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "egoexo/buffer/pose_buffer.hpp"
#include "egoexo/exo/synthesis.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/sim/source.hpp"

namespace egoexo::service {

struct ReplaySourceConfig {
  std::filesystem::path trajectory;
  std::filesystem::path images;
  double tolerance = 0.02;
};

struct SimulateSourceConfig {
  sim::TrajectoryKind kind = sim::TrajectoryKind::smooth_6dof;
  std::size_t steps = 2000;
  std::size_t landmarks = 150;
  std::uint64_t seed = 1;
  double sigma_t = 0.0;
  double sigma_r = 0.0;
};

struct SessionConfig {
  buffer::BufferConfig buffer;
  exo::RenderConfig render;
  geom::CameraIntrinsics intrinsics;
  std::variant<SimulateSourceConfig, ReplaySourceConfig> source;
  std::string host = "127.0.0.1";
  /// 0 picks a free port (tests); otherwise 1..65535.
  std::uint16_t port = 7600;
  int jpeg_quality = 80;
  std::size_t points = 10000;
  std::uint64_t sample_seed = 7;
  /// Robot mesh; empty means the bundled BlueROV2 model.
  std::filesystem::path model;
  double model_scale = 1.0;
  /// Source pacing in events per second; 0 runs as fast as possible.
  double rate_hz = 25.0;
  std::size_t map_history = 10000;
  /// Keep serving this long after the source is exhausted.
  double linger_s = 0.0;

  /// Throws ValidationError on out-of-range values or a replay source
  /// missing its paths.
  void validate() const;
  std::string source_name() const;
  std::string listen_address() const;
};

/// Applies one `key=value` setting; throws ValidationError on an unknown
/// key or a bad value. Keys:
///   buffer_size pose_threshold lambda1 lambda2 point_radius transfer_mode
///   fx fy cx cy width height jpeg_quality points sample_seed model
///   model_scale rate_hz map_history linger listen source trajectory
///   images pairing_tolerance sim_kind sim_steps sim_landmarks sim_seed
///   sigma_t sigma_r
void apply_setting(SessionConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines, `#` comments. Errors carry the line number.
SessionConfig parse_config(std::istream& in, SessionConfig base = {});
SessionConfig read_config(const std::filesystem::path& path, SessionConfig base = {});

/// Inverse of parse_config for every key above.
void write_config(std::ostream& out, const SessionConfig& config);

}  // namespace egoexo::service
