#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egoexo/exo/map.hpp"
#include "egoexo/geom/camera.hpp"
#include "egoexo/geom/pose.hpp"
#include "egoexo/service/protocol.hpp"

namespace egoexo::service {

/// {"t":[x,y,z],"q":[qx,qy,qz,qw],"ts":seconds}
nlohmann::json pose_to_json(const geom::Pose& pose);
/// Normalizes q; throws ProtocolError on a malformed or zero quaternion.
geom::Pose pose_from_json(const nlohmann::json& j);

struct EgoFrame {
  std::uint64_t seq = 0;
  geom::Pose pose;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> jpeg;
};

struct ExoRequest {
  long long f = 1;
  /// Also render the map from this virtual camera.
  std::optional<geom::Pose> map_view;
  /// Echoed in the response when present.
  std::optional<std::int64_t> request_id;
};

struct ExoResponse {
  long long f = 0;
  bool clamped = false;
  std::uint64_t reference_seq = 0;
  std::uint64_t current_seq = 0;
  /// This request's synthesis time and the session-wide running mean.
  double latency_ms = 0.0;
  double mean_latency_ms = 0.0;
  std::size_t overlay_pixel_count = 0;
  int width = 0;
  int height = 0;
  std::optional<std::int64_t> request_id;
  std::vector<std::uint8_t> jpeg;
  /// Present when the request carried map_view; appended after the exo JPEG.
  std::optional<std::vector<std::uint8_t>> map_jpeg;
};

struct MapSnapshotMessage {
  std::uint64_t frames_seen = 0;
  std::vector<Eigen::Vector3f> trajectory;
  std::vector<Eigen::Vector3f> features;
  std::vector<Eigen::Vector3f> rov_points;
  std::optional<geom::Pose> current;
};

/// Fixed status vocabulary; `detail` is free text.
enum class StatusState { connected, running, warming_up, complete, error };
std::string_view to_string(StatusState s) noexcept;

struct Status {
  StatusState state = StatusState::running;
  std::string detail;
  /// Machine-readable error code for state == error.
  std::string code;
  std::uint64_t frames_admitted = 0;
  std::size_t buffer_size = 0;
};

/// Session parameters the console needs; sent first on every connection.
struct ConfigMessage {
  std::size_t capacity = 100;
  double pose_threshold = 0.001;
  geom::CameraIntrinsics intrinsics;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int point_radius = 2;
  std::string transfer_mode = "standard";
  std::size_t points = 10000;
  int jpeg_quality = 80;
  std::size_t map_history = 10000;
  std::string source = "simulate";
};

Message to_message(const EgoFrame& m);
Message to_message(const ExoRequest& m);
Message to_message(const ExoResponse& m);
Message to_message(const MapSnapshotMessage& m);
Message to_message(const Status& m);
Message to_message(const ConfigMessage& m);

/// Each parser checks the type byte and required fields and throws
/// ProtocolError on violations. parse_exo_request enforces f >= 1.
EgoFrame parse_ego_frame(const Message& m);
ExoRequest parse_exo_request(const Message& m);
ExoResponse parse_exo_response(const Message& m);
MapSnapshotMessage parse_map_snapshot(const Message& m);
Status parse_status(const Message& m);
ConfigMessage parse_config(const Message& m);

/// Map state packed for the wire (float32).
MapSnapshotMessage pack_map(const exo::MapSnapshot& map, const std::optional<geom::Pose>& current);

}  // namespace egoexo::service
