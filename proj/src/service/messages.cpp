#include "egoexo/service/messages.hpp"

#include <bit>
#include <cmath>
#include <climits>
#include <cstring>

#include "egoexo/errors.hpp"

namespace egoexo::service {
namespace {

using nlohmann::json;

void expect_type(const Message& m, MessageType t) {
  if (m.type != t)
    throw ProtocolError("expected " + std::string(type_name(t)) + ", got " + std::string(type_name(m.type)));
}

const json& field(const json& h, const char* key) {
  const auto it = h.find(key);
  if (it == h.end()) throw ProtocolError(std::string("missing header field '") + key + "'");
  return *it;
}

template <typename T>
T integer(const json& h, const char* key) {
  const json& v = field(h, key);
  if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + key + "' must be an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.is_number_unsigned()) return v.get<T>();
    if (v.get<long long>() < 0) throw ProtocolError(std::string("field '") + key + "' must be non-negative");
  }
  return v.get<T>();
}

double number(const json& h, const char* key) {
  const json& v = field(h, key);
  if (!v.is_number()) throw ProtocolError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

bool boolean(const json& h, const char* key) {
  const json& v = field(h, key);
  if (!v.is_boolean()) throw ProtocolError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string text(const json& h, const char* key) {
  const json& v = field(h, key);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void put_f32le(std::vector<std::uint8_t>& out, float f) {
  std::uint32_t u = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

float get_f32le(const std::uint8_t* p) {
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= std::uint32_t{p[i]} << (8 * i);
  return std::bit_cast<float>(u);
}

void put_points(std::vector<std::uint8_t>& out, const std::vector<Eigen::Vector3f>& pts) {
  for (const auto& p : pts)
    for (int i = 0; i < 3; ++i) put_f32le(out, p[i]);
}

std::vector<Eigen::Vector3f> get_points(const std::uint8_t*& p, std::size_t n) {
  std::vector<Eigen::Vector3f> out(n);
  for (auto& v : out)
    for (int i = 0; i < 3; ++i, p += 4) v[i] = get_f32le(p);
  return out;
}

}  // namespace

json pose_to_json(const geom::Pose& pose) {
  const auto q = pose.quaternion();
  return {{"t", {pose.translation.x(), pose.translation.y(), pose.translation.z()}},
          {"q", {q.x(), q.y(), q.z(), q.w()}},
          {"ts", pose.timestamp}};
}

geom::Pose pose_from_json(const json& j) {
  if (!j.is_object()) throw ProtocolError("pose must be an object");
  auto vec = [&](const char* key, std::size_t n) {
    const json& v = field(j, key);
    if (!v.is_array() || v.size() != n) throw ProtocolError(std::string("pose '") + key + "' has the wrong length");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ProtocolError(std::string("pose '") + key + "' must hold numbers");
      out.push_back(x.get<double>());
      if (!std::isfinite(out.back())) throw ProtocolError("pose values must be finite");
    }
    return out;
  };
  const auto t = vec("t", 3);
  const auto q = vec("q", 4);
  const double ts = j.contains("ts") ? number(j, "ts") : 0.0;
  if (!std::isfinite(ts) || ts < 0.0) throw ProtocolError("pose ts must be finite and non-negative");
  const Eigen::Quaterniond quat(q[3], q[0], q[1], q[2]);
  if (quat.norm() < 1e-12) throw ProtocolError("pose quaternion is zero");
  return geom::Pose::from_quaternion({t[0], t[1], t[2]}, quat, ts);
}

std::string_view to_string(StatusState s) noexcept {
  switch (s) {
    case StatusState::connected: return "connected";
    case StatusState::running: return "running";
    case StatusState::warming_up: return "warming_up";
    case StatusState::complete: return "complete";
    case StatusState::error: return "error";
  }
  return "error";
}

Message to_message(const EgoFrame& m) {
  Message out;
  out.type = MessageType::ego_frame;
  out.header = {{"seq", m.seq}, {"pose", pose_to_json(m.pose)}, {"width", m.width}, {"height", m.height},
                {"encoding", "jpeg"}};
  out.payload = m.jpeg;
  return out;
}

Message to_message(const ExoRequest& m) {
  Message out;
  out.type = MessageType::exo_request;
  out.header = {{"f", m.f}};
  if (m.map_view) out.header["map_view"] = pose_to_json(*m.map_view);
  if (m.request_id) out.header["request_id"] = *m.request_id;
  return out;
}

Message to_message(const ExoResponse& m) {
  Message out;
  out.type = MessageType::exo_response;
  out.header = {{"f", m.f},
                {"clamped", m.clamped},
                {"reference_seq", m.reference_seq},
                {"current_seq", m.current_seq},
                {"latency_ms", m.latency_ms},
                {"mean_latency_ms", m.mean_latency_ms},
                {"overlay_pixel_count", m.overlay_pixel_count},
                {"width", m.width},
                {"height", m.height},
                {"encoding", "jpeg"},
                {"image_bytes", m.jpeg.size()}};
  if (m.request_id) out.header["request_id"] = *m.request_id;
  out.payload = m.jpeg;
  if (m.map_jpeg) {
    out.header["map_bytes"] = m.map_jpeg->size();
    out.payload.insert(out.payload.end(), m.map_jpeg->begin(), m.map_jpeg->end());
  }
  return out;
}

Message to_message(const MapSnapshotMessage& m) {
  Message out;
  out.type = MessageType::map_snapshot;
  out.header = {{"frames_seen", m.frames_seen},
                {"trajectory", m.trajectory.size()},
                {"features", m.features.size()},
                {"rov_points", m.rov_points.size()},
                {"encoding", "f32le"}};
  if (m.current) out.header["current"] = pose_to_json(*m.current);
  out.payload.reserve(12 * (m.trajectory.size() + m.features.size() + m.rov_points.size()));
  put_points(out.payload, m.trajectory);
  put_points(out.payload, m.features);
  put_points(out.payload, m.rov_points);
  return out;
}

Message to_message(const Status& m) {
  Message out;
  out.type = MessageType::status;
  out.header = {{"state", to_string(m.state)}, {"detail", m.detail}, {"frames_admitted", m.frames_admitted},
                {"buffer_size", m.buffer_size}};
  if (!m.code.empty()) out.header["code"] = m.code;
  return out;
}

Message to_message(const ConfigMessage& m) {
  Message out;
  out.type = MessageType::config;
  const auto& k = m.intrinsics;
  out.header = {{"capacity", m.capacity},
                {"pose_threshold", m.pose_threshold},
                {"intrinsics",
                 {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}}},
                {"lambda1", m.lambda1},
                {"lambda2", m.lambda2},
                {"point_radius", m.point_radius},
                {"transfer_mode", m.transfer_mode},
                {"points", m.points},
                {"jpeg_quality", m.jpeg_quality},
                {"map_history", m.map_history},
                {"source", m.source}};
  return out;
}

EgoFrame parse_ego_frame(const Message& m) {
  expect_type(m, MessageType::ego_frame);
  EgoFrame out;
  out.seq = integer<std::uint64_t>(m.header, "seq");
  out.pose = pose_from_json(field(m.header, "pose"));
  out.width = integer<int>(m.header, "width");
  out.height = integer<int>(m.header, "height");
  out.jpeg = m.payload;
  return out;
}

ExoRequest parse_exo_request(const Message& m) {
  expect_type(m, MessageType::exo_request);
  ExoRequest out;
  const json& f = field(m.header, "f");
  if (!f.is_number_integer()) throw ProtocolError("f must be an integer");
  if (f.is_number_unsigned()) {
    if (f.get<std::uint64_t>() > static_cast<std::uint64_t>(LLONG_MAX)) throw ProtocolError("f is out of range");
    out.f = static_cast<long long>(f.get<std::uint64_t>());
  } else {
    out.f = f.get<long long>();
  }
  if (out.f < 1) throw ProtocolError("f must be >= 1");
  if (const auto it = m.header.find("map_view"); it != m.header.end() && !it->is_null())
    out.map_view = pose_from_json(*it);
  if (m.header.contains("request_id")) out.request_id = integer<std::int64_t>(m.header, "request_id");
  return out;
}

ExoResponse parse_exo_response(const Message& m) {
  expect_type(m, MessageType::exo_response);
  ExoResponse out;
  out.f = integer<long long>(m.header, "f");
  out.clamped = boolean(m.header, "clamped");
  out.reference_seq = integer<std::uint64_t>(m.header, "reference_seq");
  out.current_seq = integer<std::uint64_t>(m.header, "current_seq");
  out.latency_ms = number(m.header, "latency_ms");
  out.mean_latency_ms = number(m.header, "mean_latency_ms");
  out.overlay_pixel_count = integer<std::size_t>(m.header, "overlay_pixel_count");
  out.width = integer<int>(m.header, "width");
  out.height = integer<int>(m.header, "height");
  if (m.header.contains("request_id")) out.request_id = integer<std::int64_t>(m.header, "request_id");
  const auto image_bytes = integer<std::size_t>(m.header, "image_bytes");
  const std::size_t map_bytes = m.header.contains("map_bytes") ? integer<std::size_t>(m.header, "map_bytes") : 0;
  if (image_bytes + map_bytes != m.payload.size()) throw ProtocolError("payload size disagrees with byte counts");
  out.jpeg.assign(m.payload.begin(), m.payload.begin() + static_cast<std::ptrdiff_t>(image_bytes));
  if (m.header.contains("map_bytes"))
    out.map_jpeg.emplace(m.payload.begin() + static_cast<std::ptrdiff_t>(image_bytes), m.payload.end());
  return out;
}

MapSnapshotMessage parse_map_snapshot(const Message& m) {
  expect_type(m, MessageType::map_snapshot);
  MapSnapshotMessage out;
  out.frames_seen = integer<std::uint64_t>(m.header, "frames_seen");
  const auto nt = integer<std::size_t>(m.header, "trajectory");
  const auto nf = integer<std::size_t>(m.header, "features");
  const auto nr = integer<std::size_t>(m.header, "rov_points");
  if (12 * (nt + nf + nr) != m.payload.size()) throw ProtocolError("map payload size disagrees with section counts");
  const std::uint8_t* p = m.payload.data();
  out.trajectory = get_points(p, nt);
  out.features = get_points(p, nf);
  out.rov_points = get_points(p, nr);
  if (const auto it = m.header.find("current"); it != m.header.end()) out.current = pose_from_json(*it);
  return out;
}

Status parse_status(const Message& m) {
  expect_type(m, MessageType::status);
  Status out;
  const std::string state = text(m.header, "state");
  bool known = false;
  for (const auto s : {StatusState::connected, StatusState::running, StatusState::warming_up,
                       StatusState::complete, StatusState::error})
    if (state == to_string(s)) out.state = s, known = true;
  if (!known) throw ProtocolError("unknown status state '" + state + "'");
  if (m.header.contains("detail")) out.detail = text(m.header, "detail");
  if (m.header.contains("code")) out.code = text(m.header, "code");
  if (m.header.contains("frames_admitted")) out.frames_admitted = integer<std::uint64_t>(m.header, "frames_admitted");
  if (m.header.contains("buffer_size")) out.buffer_size = integer<std::size_t>(m.header, "buffer_size");
  return out;
}

ConfigMessage parse_config(const Message& m) {
  expect_type(m, MessageType::config);
  ConfigMessage out;
  out.capacity = integer<std::size_t>(m.header, "capacity");
  out.pose_threshold = number(m.header, "pose_threshold");
  const json& k = field(m.header, "intrinsics");
  out.intrinsics = {number(k, "fx"), number(k, "fy"), number(k, "cx"), number(k, "cy"), integer<int>(k, "width"),
                    integer<int>(k, "height")};
  out.lambda1 = number(m.header, "lambda1");
  out.lambda2 = number(m.header, "lambda2");
  out.point_radius = integer<int>(m.header, "point_radius");
  out.transfer_mode = text(m.header, "transfer_mode");
  out.points = integer<std::size_t>(m.header, "points");
  out.jpeg_quality = integer<int>(m.header, "jpeg_quality");
  out.map_history = integer<std::size_t>(m.header, "map_history");
  out.source = text(m.header, "source");
  return out;
}

MapSnapshotMessage pack_map(const exo::MapSnapshot& map, const std::optional<geom::Pose>& current) {
  MapSnapshotMessage out;
  out.frames_seen = map.frames_seen;
  auto cast = [](const std::vector<Eigen::Vector3d>& in) {
    std::vector<Eigen::Vector3f> v;
    v.reserve(in.size());
    for (const auto& p : in) v.push_back(p.cast<float>());
    return v;
  };
  out.trajectory = cast(map.trajectory);
  out.features = cast(map.feature_points.points);
  out.rov_points = cast(map.rov_points.points);
  out.current = current;
  return out;
}

}  // namespace egoexo::service
