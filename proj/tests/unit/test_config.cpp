#include <doctest.h>

#include <sstream>

#include "egoexo/errors.hpp"
#include "egoexo/service/config.hpp"

using namespace egoexo;
using namespace egoexo::service;

TEST_CASE("defaults carry the published implementation constants") {
  const SessionConfig c;
  CHECK(c.buffer.capacity == 100);
  CHECK(c.buffer.pose_threshold == 0.001);
  CHECK(c.points == 10000);
  CHECK(c.render.lambda1 == 1.0);
  CHECK(c.render.lambda2 == 1.0);
  CHECK(c.source_name() == "simulate");
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config: key = value lines with comments") {
  std::istringstream in(
      "# session\n"
      "buffer_size = 50\n"
      "pose_threshold=0.01   # metres\n"
      "\n"
      "listen = 0.0.0.0:9000\n"
      "transfer_mode = paper_literal\n"
      "sim_kind = planar_2dof\n");
  const auto c = parse_config(in);
  CHECK(c.buffer.capacity == 50);
  CHECK(c.buffer.pose_threshold == 0.01);
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9000);
  CHECK(c.render.transfer_mode == geom::TransferMode::paper_literal);
  CHECK(std::get<SimulateSourceConfig>(c.source).kind == sim::TrajectoryKind::planar_2dof);
}

TEST_CASE("parse_config: errors carry the line number") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_config(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("buffer_size = 10\nbogus = 1\n") == 2);
  CHECK(line_of("\n\njpeg_quality = 101\n") == 3);
  CHECK(line_of("points = ten\n") == 1);
  CHECK(line_of("no equals sign\n") == 1);
  CHECK(line_of("listen = localhost\n") == 1);
  CHECK(line_of("listen = h:70000\n") == 1);
}

TEST_CASE("write_config then parse_config is the identity") {
  SessionConfig a;
  a.buffer.capacity = 37;
  a.buffer.pose_threshold = 0.0123456789;
  a.render.lambda2 = 1.7;
  a.intrinsics.fx = 612.25;
  a.port = 0;
  a.model = "/tmp/model.ply";
  a.linger_s = 2.5;
  a.source = ReplaySourceConfig{"/d/traj.txt", "/d/images", 0.05};
  std::stringstream s;
  write_config(s, a);
  const auto b = parse_config(s);
  CHECK(b.buffer.capacity == 37);
  CHECK(b.buffer.pose_threshold == a.buffer.pose_threshold);
  CHECK(b.render.lambda2 == 1.7);
  CHECK(b.intrinsics.fx == 612.25);
  CHECK(b.port == 0);
  CHECK(b.model == a.model);
  CHECK(b.linger_s == 2.5);
  const auto& r = std::get<ReplaySourceConfig>(b.source);
  CHECK(r.trajectory == "/d/traj.txt");
  CHECK(r.tolerance == 0.05);

  std::stringstream again;
  write_config(again, b);
  std::stringstream first;
  write_config(first, a);
  CHECK(again.str() == first.str());
}

TEST_CASE("validate: exactly one source, complete and in range") {
  SessionConfig c;
  c.source = ReplaySourceConfig{};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.source = ReplaySourceConfig{"t.txt", "imgs", 0.02};
  CHECK_NOTHROW(c.validate());
  c.jpeg_quality = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.jpeg_quality = 80;
  c.buffer.capacity = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("apply_setting switches source variants") {
  SessionConfig c;
  apply_setting(c, "trajectory", "a.txt");
  CHECK(c.source_name() == "replay");
  apply_setting(c, "sim_steps", "10");
  CHECK(c.source_name() == "simulate");
  CHECK(std::get<SimulateSourceConfig>(c.source).steps == 10);
  CHECK_THROWS_AS(apply_setting(c, "nope", "1"), ValidationError);
}
