#include "egoexo/service/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

#include "egoexo/errors.hpp"

namespace egoexo::service {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(d))
    throw ValidationError(key + ": expected a number, got '" + v + "'");
  return d;
}

long long to_int(const std::string& key, const std::string& v, long long lo, long long hi) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ValidationError(key + ": expected an integer, got '" + v + "'");
  if (i < lo || i > hi)
    throw ValidationError(key + ": " + v + " is outside " + std::to_string(lo) + ".." + std::to_string(hi));
  return i;
}

SimulateSourceConfig& simulate(SessionConfig& c) {
  if (!std::holds_alternative<SimulateSourceConfig>(c.source)) c.source = SimulateSourceConfig{};
  return std::get<SimulateSourceConfig>(c.source);
}

ReplaySourceConfig& replay(SessionConfig& c) {
  if (!std::holds_alternative<ReplaySourceConfig>(c.source)) c.source = ReplaySourceConfig{};
  return std::get<ReplaySourceConfig>(c.source);
}

constexpr long long kMaxCount = std::numeric_limits<int>::max();

using Setter = std::function<void(SessionConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"buffer_size", [](auto& c, auto& k, auto& v) { c.buffer.capacity = to_int(k, v, 2, kMaxCount); }},
      {"pose_threshold", [](auto& c, auto& k, auto& v) { c.buffer.pose_threshold = to_double(k, v); }},
      {"lambda1", [](auto& c, auto& k, auto& v) { c.render.lambda1 = to_double(k, v); }},
      {"lambda2", [](auto& c, auto& k, auto& v) { c.render.lambda2 = to_double(k, v); }},
      {"point_radius", [](auto& c, auto& k, auto& v) { c.render.point_radius = to_int(k, v, 1, 64); }},
      {"transfer_mode",
       [](auto& c, auto& k, auto& v) {
         if (v == "standard")
           c.render.transfer_mode = geom::TransferMode::standard;
         else if (v == "paper_literal")
           c.render.transfer_mode = geom::TransferMode::paper_literal;
         else
           throw ValidationError(k + ": expected standard or paper_literal");
       }},
      {"fx", [](auto& c, auto& k, auto& v) { c.intrinsics.fx = to_double(k, v); }},
      {"fy", [](auto& c, auto& k, auto& v) { c.intrinsics.fy = to_double(k, v); }},
      {"cx", [](auto& c, auto& k, auto& v) { c.intrinsics.cx = to_double(k, v); }},
      {"cy", [](auto& c, auto& k, auto& v) { c.intrinsics.cy = to_double(k, v); }},
      {"width", [](auto& c, auto& k, auto& v) { c.intrinsics.width = static_cast<int>(to_int(k, v, 1, 16384)); }},
      {"height", [](auto& c, auto& k, auto& v) { c.intrinsics.height = static_cast<int>(to_int(k, v, 1, 16384)); }},
      {"jpeg_quality", [](auto& c, auto& k, auto& v) { c.jpeg_quality = static_cast<int>(to_int(k, v, 1, 100)); }},
      {"points", [](auto& c, auto& k, auto& v) { c.points = to_int(k, v, 1, kMaxCount); }},
      {"sample_seed", [](auto& c, auto& k, auto& v) { c.sample_seed = to_int(k, v, 0, kMaxCount); }},
      {"model", [](auto& c, auto&, auto& v) { c.model = v; }},
      {"model_scale", [](auto& c, auto& k, auto& v) { c.model_scale = to_double(k, v); }},
      {"rate_hz", [](auto& c, auto& k, auto& v) { c.rate_hz = to_double(k, v); }},
      {"map_history", [](auto& c, auto& k, auto& v) { c.map_history = to_int(k, v, 1, kMaxCount); }},
      {"linger", [](auto& c, auto& k, auto& v) { c.linger_s = to_double(k, v); }},
      {"listen",
       [](auto& c, auto& k, auto& v) {
         const auto colon = v.rfind(':');
         if (colon == std::string::npos) throw ValidationError(k + ": expected host:port");
         c.host = v.substr(0, colon);
         c.port = static_cast<std::uint16_t>(to_int(k, v.substr(colon + 1), 0, 65535));
       }},
      {"source",
       [](auto& c, auto& k, auto& v) {
         if (v == "simulate")
           simulate(c);
         else if (v == "replay")
           replay(c);
         else
           throw ValidationError(k + ": expected simulate or replay");
       }},
      {"trajectory", [](auto& c, auto&, auto& v) { replay(c).trajectory = v; }},
      {"images", [](auto& c, auto&, auto& v) { replay(c).images = v; }},
      {"pairing_tolerance", [](auto& c, auto& k, auto& v) { replay(c).tolerance = to_double(k, v); }},
      {"sim_kind",
       [](auto& c, auto& k, auto& v) {
         if (v == "planar_2dof")
           simulate(c).kind = sim::TrajectoryKind::planar_2dof;
         else if (v == "smooth_6dof")
           simulate(c).kind = sim::TrajectoryKind::smooth_6dof;
         else
           throw ValidationError(k + ": expected planar_2dof or smooth_6dof");
       }},
      {"sim_steps", [](auto& c, auto& k, auto& v) { simulate(c).steps = to_int(k, v, 2, kMaxCount); }},
      {"sim_landmarks", [](auto& c, auto& k, auto& v) { simulate(c).landmarks = to_int(k, v, 0, kMaxCount); }},
      {"sim_seed", [](auto& c, auto& k, auto& v) { simulate(c).seed = to_int(k, v, 0, kMaxCount); }},
      {"sigma_t", [](auto& c, auto& k, auto& v) { simulate(c).sigma_t = to_double(k, v); }},
      {"sigma_r", [](auto& c, auto& k, auto& v) { simulate(c).sigma_r = to_double(k, v); }},
  };
  return table;
}

}  // namespace

void SessionConfig::validate() const {
  buffer.validate();
  render.validate();
  intrinsics.validate();
  if (jpeg_quality < 1 || jpeg_quality > 100) throw ValidationError("jpeg_quality must be in 1..100");
  if (points < 1) throw ValidationError("points must be >= 1");
  if (!(model_scale > 0.0)) throw ValidationError("model_scale must be positive");
  if (!(rate_hz >= 0.0)) throw ValidationError("rate_hz must be >= 0");
  if (!(linger_s >= 0.0)) throw ValidationError("linger must be >= 0");
  if (map_history < 1) throw ValidationError("map_history must be >= 1");
  if (host.empty()) throw ValidationError("listen host is empty");
  if (const auto* r = std::get_if<ReplaySourceConfig>(&source)) {
    if (r->trajectory.empty() || r->images.empty())
      throw ValidationError("replay source needs both trajectory and images");
    if (!(r->tolerance >= 0.0)) throw ValidationError("pairing_tolerance must be >= 0");
  } else {
    const auto& s = std::get<SimulateSourceConfig>(source);
    if (s.steps < 2) throw ValidationError("sim_steps must be >= 2");
    sim::NoiseModel{s.sigma_t, s.sigma_r, s.seed}.validate();
  }
}

std::string SessionConfig::source_name() const {
  return std::holds_alternative<ReplaySourceConfig>(source) ? "replay" : "simulate";
}

std::string SessionConfig::listen_address() const { return host + ":" + std::to_string(port); }

void apply_setting(SessionConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ValidationError("unknown setting '" + key + "'");
  it->second(config, key, value);
}

SessionConfig parse_config(std::istream& in, SessionConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    try {
      apply_setting(base, key, value);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return base;
}

SessionConfig read_config(const std::filesystem::path& path, SessionConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  try {
    return parse_config(in, std::move(base));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_config(std::ostream& out, const SessionConfig& c) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "buffer_size = " << c.buffer.capacity << '\n'
      << "pose_threshold = " << num(c.buffer.pose_threshold) << '\n'
      << "lambda1 = " << num(c.render.lambda1) << '\n'
      << "lambda2 = " << num(c.render.lambda2) << '\n'
      << "point_radius = " << c.render.point_radius << '\n'
      << "transfer_mode = "
      << (c.render.transfer_mode == geom::TransferMode::standard ? "standard" : "paper_literal") << '\n'
      << "fx = " << num(c.intrinsics.fx) << '\n'
      << "fy = " << num(c.intrinsics.fy) << '\n'
      << "cx = " << num(c.intrinsics.cx) << '\n'
      << "cy = " << num(c.intrinsics.cy) << '\n'
      << "width = " << c.intrinsics.width << '\n'
      << "height = " << c.intrinsics.height << '\n'
      << "jpeg_quality = " << c.jpeg_quality << '\n'
      << "points = " << c.points << '\n'
      << "sample_seed = " << c.sample_seed << '\n';
  if (!c.model.empty()) out << "model = " << c.model.string() << '\n';
  out << "model_scale = " << num(c.model_scale) << '\n'
      << "rate_hz = " << num(c.rate_hz) << '\n'
      << "map_history = " << c.map_history << '\n'
      << "linger = " << num(c.linger_s) << '\n'
      << "listen = " << c.listen_address() << '\n'
      << "source = " << c.source_name() << '\n';
  if (const auto* r = std::get_if<ReplaySourceConfig>(&c.source)) {
    out << "trajectory = " << r->trajectory.string() << '\n'
        << "images = " << r->images.string() << '\n'
        << "pairing_tolerance = " << num(r->tolerance) << '\n';
  } else {
    const auto& s = std::get<SimulateSourceConfig>(c.source);
    out << "sim_kind = " << (s.kind == sim::TrajectoryKind::planar_2dof ? "planar_2dof" : "smooth_6dof") << '\n'
        << "sim_steps = " << s.steps << '\n'
        << "sim_landmarks = " << s.landmarks << '\n'
        << "sim_seed = " << s.seed << '\n'
        << "sigma_t = " << num(s.sigma_t) << '\n'
        << "sigma_r = " << num(s.sigma_r) << '\n';
  }
}

}  // namespace egoexo::service
