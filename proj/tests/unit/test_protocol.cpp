#include <doctest.h>

#include <cstring>
#include <random>
#include <string>

#include "egoexo/errors.hpp"
#include "egoexo/service/messages.hpp"
#include "egoexo/service/protocol.hpp"
#include "support/random_geometry.hpp"
#include "support/random_messages.hpp"

using namespace egoexo;
using namespace egoexo::service;
using nlohmann::json;
using egoexo::testing::random_message;

namespace {

std::vector<std::uint8_t> frame_bytes(std::uint32_t length, std::uint8_t type, std::uint32_t header_len,
                                      const std::string& header, std::size_t payload) {
  std::vector<std::uint8_t> out;
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(length >> (8 * i)));
  out.push_back(type);
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(header_len >> (8 * i)));
  out.insert(out.end(), header.begin(), header.end());
  out.resize(out.size() + payload, 0x42);
  return out;
}

}  // namespace

TEST_CASE("encode: exact byte layout") {
  Message m;
  m.type = MessageType::status;
  m.header = {{"a", 1}};
  m.payload = {0xAB};
  const auto bytes = encode(m);
  const std::vector<std::uint8_t> expected = {0x00, 0x00, 0x00, 0x0D, 0x05, 0x00, 0x00, 0x00, 0x07,
                                              '{',  '"',  'a',  '"',  ':',  '1',  '}',  0xAB};
  CHECK(bytes == expected);
}

TEST_CASE("encode: length equals 1 + 4 + header_len + payload length") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Message m = random_message(rng);
    const auto bytes = encode(m);
    const std::uint32_t length = (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
                                 (std::uint32_t{bytes[2]} << 8) | bytes[3];
    const std::uint32_t header_len = (std::uint32_t{bytes[5]} << 24) | (std::uint32_t{bytes[6]} << 16) |
                                     (std::uint32_t{bytes[7]} << 8) | bytes[8];
    CHECK(bytes[4] == static_cast<std::uint8_t>(m.type));
    CHECK(length == 1 + 4 + header_len + m.payload.size());
    CHECK(bytes.size() == 4 + length);
  }
}

TEST_CASE("property: concatenated messages re-parse identically under arbitrary splits") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 20; ++round) {
    std::vector<Message> sent;
    std::vector<std::uint8_t> stream;
    for (int i = 0; i < 50; ++i) {
      sent.push_back(random_message(rng));
      encode_into(stream, sent.back());
    }
    FrameDecoder dec;
    std::vector<Message> got;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      // Split points include single bytes so every field boundary gets cut.
      const std::size_t max_chunk = std::bernoulli_distribution(0.3)(rng) ? 3 : 5000;
      const std::size_t n = std::min(stream.size() - pos, std::uniform_int_distribution<std::size_t>(1, max_chunk)(rng));
      dec.feed({stream.data() + pos, n});
      pos += n;
      while (auto m = dec.next()) got.push_back(std::move(*m));
    }
    CHECK(dec.pending() == 0);
    REQUIRE(got.size() == sent.size());
    for (std::size_t i = 0; i < sent.size(); ++i) CHECK(got[i] == sent[i]);
  }
}

TEST_CASE("decode_all rejects a trailing partial frame") {
  Message m;
  auto bytes = encode(m);
  bytes.pop_back();
  CHECK_THROWS_AS(decode_all(bytes), ProtocolError);
}

TEST_CASE("decoder rejects malformed frames") {
  auto rejects = [](const std::vector<std::uint8_t>& bytes) {
    FrameDecoder dec;
    dec.feed(bytes);
    CHECK_THROWS_AS(dec.next(), ProtocolError);
  };
  SUBCASE("unknown type") { rejects(frame_bytes(7, 0x07, 2, "{}", 0)); }
  SUBCASE("type zero") { rejects(frame_bytes(7, 0x00, 2, "{}", 0)); }
  SUBCASE("length shorter than the fixed fields") { rejects(frame_bytes(4, 0x05, 0, "", 0)); }
  SUBCASE("header_len runs past the frame") { rejects(frame_bytes(7, 0x05, 50, "{}", 0)); }
  SUBCASE("header is not JSON") { rejects(frame_bytes(8, 0x05, 3, "{x}", 0)); }
  SUBCASE("header is a JSON array") { rejects(frame_bytes(7, 0x05, 2, "[]", 0)); }
  SUBCASE("header is not UTF-8") { rejects(frame_bytes(14, 0x05, 9, "{\"a\":\"\xff\"}", 0)); }
  SUBCASE("oversized length") { rejects(frame_bytes(kMaxFrameLength + 1, 0x05, 2, "{}", 0)); }
}

TEST_CASE("decoder waits for more bytes on a partial frame") {
  Message m;
  m.payload = {1, 2, 3};
  const auto bytes = encode(m);
  FrameDecoder dec;
  dec.feed({bytes.data(), bytes.size() - 1});
  CHECK_FALSE(dec.next().has_value());
  dec.feed({bytes.data() + bytes.size() - 1, 1});
  CHECK(dec.next() == m);
}

TEST_CASE("encode rejects a non-object header") {
  Message m;
  m.header = json::array();
  CHECK_THROWS_AS(encode(m), ProtocolError);
}

TEST_CASE("registry values are fixed") {
  CHECK(static_cast<int>(MessageType::ego_frame) == 0x01);
  CHECK(static_cast<int>(MessageType::exo_request) == 0x02);
  CHECK(static_cast<int>(MessageType::exo_response) == 0x03);
  CHECK(static_cast<int>(MessageType::map_snapshot) == 0x04);
  CHECK(static_cast<int>(MessageType::status) == 0x05);
  CHECK(static_cast<int>(MessageType::config) == 0x06);
  CHECK_FALSE(is_registered(0x00));
  CHECK_FALSE(is_registered(0x07));
  CHECK(type_name(MessageType::exo_request) == "EXO_REQUEST");
}

TEST_CASE("pose json uses t, q as [qx,qy,qz,qw] and ts") {
  geom::Pose p = geom::Pose::from_quaternion({1, 2, 3}, Eigen::Quaterniond(0.5, 0.5, 0.5, 0.5), 12.5);
  const json j = pose_to_json(p);
  CHECK(j["t"] == json::array({1.0, 2.0, 3.0}));
  CHECK(j["q"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["q"][3].get<double>() == doctest::Approx(0.5));
  CHECK(j["ts"].get<double>() == 12.5);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const geom::Pose a = testing::random_pose(rng);
    const geom::Pose b = pose_from_json(pose_to_json(a));
    CHECK((a.rotation - b.rotation).norm() < 1e-12);
    CHECK((a.translation - b.translation).norm() < 1e-12);
  }
}

TEST_CASE("pose json: unnormalized q is normalized, zero q rejected") {
  const geom::Pose p = pose_from_json(json{{"t", {0, 0, 0}}, {"q", {0, 0, 0, 2}}, {"ts", 0}});
  CHECK((p.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK_THROWS_AS(pose_from_json(json{{"t", {0, 0, 0}}, {"q", {0, 0, 0, 0}}}), ProtocolError);
  CHECK_THROWS_AS(pose_from_json(json{{"t", {0, 0}}, {"q", {0, 0, 0, 1}}}), ProtocolError);
  CHECK_THROWS_AS(pose_from_json(json{{"q", {0, 0, 0, 1}}}), ProtocolError);
}

TEST_CASE("EXO_REQUEST: f must be an integer >= 1") {
  ExoRequest r;
  r.f = 70;
  r.request_id = 9;
  const auto back = parse_exo_request(to_message(r));
  CHECK(back.f == 70);
  CHECK(back.request_id == 9);
  CHECK_FALSE(back.map_view.has_value());

  Message m;
  m.type = MessageType::exo_request;
  m.header = {{"f", 0}};
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
  m.header = {{"f", -3}};
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
  m.header = {{"f", 2.5}};
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
  m.header = {{"f", "10"}};
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
  m.header = json::object();
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
  m.header = {{"f", 1}};
  CHECK(parse_exo_request(m).f == 1);
  m.type = MessageType::status;
  CHECK_THROWS_AS(parse_exo_request(m), ProtocolError);
}

TEST_CASE("EXO_REQUEST map_view round-trips") {
  ExoRequest r;
  r.f = 5;
  r.map_view = geom::Pose::from_quaternion({0, 0, 10}, Eigen::Quaterniond::Identity(), 0.0);
  const auto back = parse_exo_request(to_message(r));
  REQUIRE(back.map_view.has_value());
  CHECK((back.map_view->translation - Eigen::Vector3d(0, 0, 10)).norm() < 1e-12);
}

TEST_CASE("EXO_RESPONSE: header fields and split payload round-trip") {
  ExoResponse r;
  r.f = 200;
  r.clamped = true;
  r.reference_seq = 10;
  r.current_seq = 109;
  r.latency_ms = 3.25;
  r.mean_latency_ms = 4.0;
  r.overlay_pixel_count = 1234;
  r.width = 640;
  r.height = 480;
  r.jpeg = {1, 2, 3, 4};
  r.map_jpeg = std::vector<std::uint8_t>{9, 8};
  const Message m = to_message(r);
  CHECK(m.header["image_bytes"] == 4);
  CHECK(m.header["map_bytes"] == 2);
  CHECK(m.payload.size() == 6);
  const auto back = parse_exo_response(m);
  CHECK(back.f == 200);
  CHECK(back.clamped);
  CHECK(back.reference_seq == 10);
  CHECK(back.current_seq == 109);
  CHECK(back.mean_latency_ms == 4.0);
  CHECK(back.jpeg == r.jpeg);
  CHECK(back.map_jpeg == r.map_jpeg);

  Message bad = m;
  bad.payload.pop_back();
  CHECK_THROWS_AS(parse_exo_response(bad), ProtocolError);
}

TEST_CASE("MAP_SNAPSHOT: little-endian float32 triplets in three sections") {
  MapSnapshotMessage s;
  s.frames_seen = 3;
  s.trajectory = {{1.0f, -2.0f, 0.5f}};
  s.features = {{0.0f, 0.0f, 0.0f}, {3.0f, 4.0f, 5.0f}};
  s.rov_points = {};
  const Message m = to_message(s);
  CHECK(m.header["trajectory"] == 1);
  CHECK(m.header["features"] == 2);
  CHECK(m.header["rov_points"] == 0);
  REQUIRE(m.payload.size() == 36);
  // 1.0f = 0x3F800000, little-endian.
  CHECK(m.payload[0] == 0x00);
  CHECK(m.payload[1] == 0x00);
  CHECK(m.payload[2] == 0x80);
  CHECK(m.payload[3] == 0x3F);
  float y = 0;
  std::memcpy(&y, m.payload.data() + 4, 4);
  CHECK(y == -2.0f);
  const auto back = parse_map_snapshot(m);
  CHECK(back.trajectory == s.trajectory);
  CHECK(back.features == s.features);
  CHECK(back.rov_points.empty());

  Message bad = m;
  bad.header["features"] = 3;
  CHECK_THROWS_AS(parse_map_snapshot(bad), ProtocolError);
}

TEST_CASE("pack_map carries every map section") {
  exo::MapSnapshot map;
  map.trajectory = {{1, 2, 3}, {4, 5, 6}};
  map.feature_points.points = {{7, 8, 9}};
  map.rov_points.points = {{0.5, 0.25, 0.125}};
  map.frames_seen = 2;
  const auto packed = pack_map(map, std::nullopt);
  CHECK(packed.trajectory.size() == 2);
  CHECK(packed.features[0] == Eigen::Vector3f(7, 8, 9));
  CHECK(packed.rov_points[0] == Eigen::Vector3f(0.5f, 0.25f, 0.125f));
  CHECK(packed.frames_seen == 2);
}

TEST_CASE("STATUS, CONFIG and EGO_FRAME round-trip") {
  Status s;
  s.state = StatusState::warming_up;
  s.detail = "need 2 frames";
  s.frames_admitted = 1;
  s.buffer_size = 1;
  const auto sb = parse_status(to_message(s));
  CHECK(sb.state == StatusState::warming_up);
  CHECK(sb.detail == s.detail);
  CHECK(to_message(s).header["state"] == "warming_up");

  Message unknown = to_message(s);
  unknown.header["state"] = "sleeping";
  CHECK_THROWS_AS(parse_status(unknown), ProtocolError);

  ConfigMessage c;
  c.capacity = 100;
  c.transfer_mode = "paper_literal";
  const auto cb = parse_config(to_message(c));
  CHECK(cb.capacity == 100);
  CHECK(cb.pose_threshold == 0.001);
  CHECK(cb.transfer_mode == "paper_literal");
  CHECK(cb.intrinsics.width == 640);

  EgoFrame e;
  e.seq = 42;
  e.width = 640;
  e.height = 480;
  e.jpeg = {0xFF, 0xD8};
  const auto eb = parse_ego_frame(to_message(e));
  CHECK(eb.seq == 42);
  CHECK(eb.jpeg == e.jpeg);
}
