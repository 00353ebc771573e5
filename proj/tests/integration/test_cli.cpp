#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "support/temp_dir.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(EGOEXO_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("cli: no subcommand prints usage and exits 2") {
  const auto r = run("");
  CHECK(r.code == 2);
  CHECK(r.out.find("Usage:") != std::string::npos);
}

TEST_CASE("cli: unknown flag prints usage and exits nonzero") {
  const auto r = run("serve --no-such-flag");
  CHECK(r.code == 2);
  CHECK(r.out.find("Usage:") != std::string::npos);
  CHECK(run("validate --bogus 3").code == 2);
}

TEST_CASE("cli: serve defaults are n=100, threshold 0.001, m=10000") {
  const auto r = run("serve --source simulate --print-config");
  CHECK(r.code == 0);
  CHECK(r.out.find("buffer_size = 100\n") != std::string::npos);
  CHECK(r.out.find("pose_threshold = 0.001\n") != std::string::npos);
  CHECK(r.out.find("points = 10000\n") != std::string::npos);
  CHECK(r.out.find("lambda1 = 1\n") != std::string::npos);
  CHECK(r.out.find("lambda2 = 1\n") != std::string::npos);
  CHECK(r.out.find("source = simulate\n") != std::string::npos);
}

TEST_CASE("cli: flags override the config file") {
  egoexo::testing::TempDir dir;
  const auto cfg = (dir.path() / "s.conf").string();
  std::ofstream(cfg) << "buffer_size = 40\npose_threshold = 0.5\n";
  const auto r = run("serve --config " + cfg + " --pose-threshold 0.002 --print-config");
  CHECK(r.code == 0);
  CHECK(r.out.find("buffer_size = 40\n") != std::string::npos);
  CHECK(r.out.find("pose_threshold = 0.002\n") != std::string::npos);
  CHECK(run("serve --buffer-size 1 --print-config").code == 1);
}

TEST_CASE("cli: serve runs a short simulated session to completion") {
  const auto r = run("serve --listen 127.0.0.1:0 --sim-steps 30 --rate 0 --points 500 --width 160");
  // --width is not a serve flag.
  CHECK(r.code == 2);
  const auto ok = run("serve --listen 127.0.0.1:0 --sim-steps 30 --rate 0 --points 500");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("session complete: 30 events") != std::string::npos);
}

TEST_CASE("cli: validate --sweep 70,140,200,260 writes a 4-row CSV and the figures") {
  egoexo::testing::TempDir dir;
  const auto r = run("validate --sweep 70,140,200,260 --out " + dir.path().string());
  REQUIRE(r.code == 0);
  CHECK(count_lines((dir.path() / "eob_sweep.csv").string()) == 5);  // header + 4 rows
  CHECK(std::filesystem::exists(dir.path() / "eob_sweep.svg"));
  CHECK(std::filesystem::exists(dir.path() / "ground_plane_cube.png"));
  CHECK(std::filesystem::exists(dir.path() / "logo_exo.png"));
  CHECK(r.out.find("monotone trend") != std::string::npos);
}

TEST_CASE("cli: simulate records a dataset that replay-check accepts") {
  egoexo::testing::TempDir dir;
  const auto ds = dir.path() / "ds";
  const auto sim = run("simulate --steps 12 --landmarks 10 --out " + ds.string());
  REQUIRE(sim.code == 0);
  CHECK(std::filesystem::exists(ds / "scene.txt"));
  const auto check =
      run("replay-check --trajectory " + (ds / "trajectory.txt").string() + " --images " + (ds / "images").string());
  CHECK(check.code == 0);
  CHECK(check.out.find("paired                 12") != std::string::npos);
  CHECK(run("replay-check --trajectory /nonexistent --images /nonexistent").code == 1);
}
