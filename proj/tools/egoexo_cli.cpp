// egoexo: serve, replay-check, validate, simulate.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "egoexo/errors.hpp"
#include "egoexo/imageio/codec.hpp"
#include "egoexo/service/config.hpp"
#include "egoexo/service/session.hpp"
#include "egoexo/sim/dataset.hpp"
#include "egoexo/sim/source.hpp"
#include "egoexo/validation/chart.hpp"
#include "egoexo/validation/drift_study.hpp"
#include "egoexo/validation/figures.hpp"
#include "egoexo/validation/logo.hpp"

namespace fs = std::filesystem;
using namespace egoexo;

namespace {

/// CLI flag -> config key. Only flags the user actually passed are applied,
/// so a --config file is overridden flag by flag.
struct SettingFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, std::string>> bound;

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help,
           const std::string& default_text = {}) {
    auto* opt = app.add_option(flag, values[key], help);
    if (!default_text.empty()) opt->default_str(default_text);
    bound.emplace_back(opt, key);
  }

  void apply(service::SessionConfig& config) const {
    for (const auto& [opt, key] : bound)
      if (opt->count() > 0) service::apply_setting(config, key, values.at(key));
  }
};

void add_session_flags(CLI::App& app, SettingFlags& flags) {
  flags.add(app, "--buffer-size", "buffer_size", "Pose buffer capacity n", "100");
  flags.add(app, "--pose-threshold", "pose_threshold", "Admission threshold (SLAM units)", "0.001");
  flags.add(app, "--points", "points", "Robot model sample count m", "10000");
  flags.add(app, "--lambda1", "lambda1", "Projection scale (cancels in pixels)", "1");
  flags.add(app, "--lambda2", "lambda2", "Robot model scale in the map", "1");
  flags.add(app, "--point-radius", "point_radius", "Splat radius in pixels");
  flags.add(app, "--transfer-mode", "transfer_mode", "standard | paper_literal", "standard");
}

int cmd_serve(const std::string& config_path, const SettingFlags& flags, bool print_config) {
  service::SessionConfig config;
  if (!config_path.empty()) config = service::read_config(config_path);
  flags.apply(config);
  config.validate();
  if (print_config) {
    service::write_config(std::cout, config);
    return 0;
  }
  service::SessionReport report;
  const int code = service::run_session(config, &report);
  std::printf("session %s: %zu events, %llu admitted, %llu exo requests (mean %.2f ms), %llu dropped\n",
              report.final_state.c_str(), report.events.size(),
              static_cast<unsigned long long>(report.frames_admitted),
              static_cast<unsigned long long>(report.exo_requests), report.mean_latency_ms,
              static_cast<unsigned long long>(report.dropped_messages));
  return code;
}

int cmd_replay_check(const fs::path& trajectory, const fs::path& images, double tolerance) {
  sim::ReplayOptions opts;
  opts.tolerance = tolerance;
  const auto c = sim::check_dataset(trajectory, images, opts);
  std::printf("poses                  %zu\n", c.poses);
  std::printf("paired                 %zu\n", c.paired);
  std::printf("unmatched poses        %zu\n", c.unmatched);
  std::printf("normalized quaternions %zu\n", c.normalized_quaternions);
  std::printf("unreadable images      %zu\n", c.unreadable_images);
  std::printf("image size             %dx%d%s\n", c.width, c.height, c.consistent_size ? "" : " (inconsistent)");
  std::printf("max pairing gap        %.6f s\n", c.max_pair_gap);
  const bool ok = c.paired > 0 && c.unreadable_images == 0 && c.consistent_size;
  std::printf("%s\n", ok ? "OK" : "FAILED");
  return ok ? 0 : 1;
}

struct ValidateOptions {
  std::string sweep = "70,140,200,260";
  fs::path out = "validation_out";
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  double sigma_t = 0.005;
  std::size_t steps = 1500;
  std::size_t buffer_size = 0;
  double pose_threshold = 0.001;
  std::size_t points = 10000;
  double cube_size = 0.5;
  fs::path model;
  bool figures = true;
};

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  body(out);
}

int cmd_validate(const ValidateOptions& o) {
  const auto f_values = validation::parse_f_list(o.sweep);
  fs::create_directories(o.out);

  auto params = validation::DriftStudyParams::planar_defaults();
  params.f_values = f_values;
  params.simulation.steps = o.steps;
  params.simulation.noise.sigma_t = o.sigma_t;
  params.pose_threshold = o.pose_threshold;
  params.capacity = o.buffer_size;

  std::size_t degrading = 0;
  validation::ErrorCurve first;
  for (std::size_t i = 0; i < o.seeds; ++i) {
    params.simulation.noise.seed = o.seed + i;
    const auto r = validation::run_drift_study(params);
    if (i == 0) first = r.curve;
    const auto& s = r.curve.samples;
    if (s.size() >= 2 && s.front().count > 0 && s.back().count > 0 && s.back().mean_error > s.front().mean_error)
      ++degrading;
  }
  auto exact = params;
  exact.simulation.noise.sigma_t = 0.0;
  exact.simulation.noise.sigma_r = 0.0;
  const auto zero = validation::run_drift_study(exact);

  write_text(o.out / "eob_sweep.csv", [&](std::ostream& s) { validation::write_csv(s, first); });
  write_text(o.out / "eob_sweep_zero_noise.csv", [&](std::ostream& s) { validation::write_csv(s, zero.curve); });
  write_text(o.out / "eob_sweep.svg", [&](std::ostream& s) {
    char label[64];
    std::snprintf(label, sizeof label, "drift sigma_t=%g", o.sigma_t);
    validation::write_error_chart_svg(s, {{label, first}, {"exact poses", zero.curve}},
                                      "Reprojection error vs EOB distance f");
  });

  std::printf("%8s %14s %14s %8s\n", "f", "mean_px", "max_px", "count");
  for (const auto& s : first.samples)
    std::printf("%8lld %14.6g %14.6g %8zu\n", s.f, s.mean_error, s.max_error, s.count);
  if (const auto tau = validation::monotone_trend(first)) std::printf("monotone trend (Kendall tau): %.3f\n", *tau);
  if (o.seeds > 1)
    std::printf("seeds where f=%lld error > f=%lld error: %zu/%zu\n", f_values.back(), f_values.front(), degrading,
                o.seeds);

  if (o.figures) {
    auto fig = params;
    fig.simulation.noise.seed = o.seed;
    const std::size_t current = std::min<std::size_t>(1200, o.steps - 1);
    // Mid-sweep f: far enough back to see the robot, before the circular
    // path turns it out of view.
    const long long f = std::min<long long>(f_values[f_values.size() / 2], static_cast<long long>(current));
    const auto setup = validation::make_figure_setup(fig, f, current);
    service::SessionConfig sc;
    sc.points = o.points;
    sc.model = o.model.empty() ? service::default_model_path().parent_path() / "turtlebot4.ply" : o.model;
    auto cloud = service::load_robot_cloud(sc);
    // Camera sits on top of the ground robot: shift the model down (camera
    // y points down) until its highest point is at camera level.
    double top = 1e300;
    for (const auto& p : cloud.points) top = std::min(top, p.y());
    for (auto& p : cloud.points) p.y() -= top;
    const auto cube = validation::render_cube_figure(setup, cloud, {}, o.cube_size);
    imageio::write_png(o.out / "ground_plane_cube.png", cube.image);
    // Smallest f keeps the tag in both views.
    const auto logo_setup = validation::make_figure_setup(fig, std::min(f, f_values.front()), current);
    const auto logo = validation::render_logo_figure(logo_setup, validation::make_logo());
    imageio::write_png(o.out / "logo_ego.png", logo.projection.ego);
    imageio::write_png(o.out / "logo_exo.png", logo.projection.exo);
    std::printf("ground plane n=(%.4f %.4f %.4f) d=%.4f; logo corner error %.3g px\n", cube.plane.normal.x(),
                cube.plane.normal.y(), cube.plane.normal.z(), cube.plane.offset, logo.max_corner_error);
  }
  std::printf("wrote %s\n", o.out.string().c_str());
  return 0;
}

struct SimulateOptions {
  std::string kind = "smooth_6dof";
  std::size_t steps = 200;
  std::size_t landmarks = 100;
  std::uint64_t seed = 1;
  double sigma_t = 0.0;
  double sigma_r = 0.0;
  fs::path out;
};

int cmd_simulate(const SimulateOptions& o) {
  sim::SimulationParams p;
  if (o.kind == "planar_2dof")
    p.kind = sim::TrajectoryKind::planar_2dof;
  else if (o.kind != "smooth_6dof")
    throw ValidationError("--kind must be planar_2dof or smooth_6dof");
  p.steps = o.steps;
  p.landmarks = o.landmarks;
  p.scene_seed = o.seed;
  p.noise = {o.sigma_t, o.sigma_r, o.seed};
  p.render_images = !o.out.empty();
  sim::SimulatedSource source(p);
  if (o.out.empty()) {
    std::size_t n = 0;
    while (source.next()) ++n;
    std::printf("simulated %zu events (not recorded; pass --out to write a dataset)\n", n);
    return 0;
  }
  const auto summary = sim::record_dataset(source, o.out);
  sim::write_scene(o.out / "scene.txt", source.scene());
  sim::write_trajectory(o.out / "groundtruth.txt", source.ground_truth());
  std::printf("recorded %zu events to %s\n", summary.events, o.out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ego-to-exo teleoperation views: session host and validation tools", "egoexo"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  auto* serve = app.add_subcommand("serve", "Run a session and serve the console protocol");
  std::string config_path;
  bool print_config = false;
  SettingFlags serve_flags;
  serve->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  serve_flags.add(*serve, "--source", "source", "simulate | replay", "simulate");
  serve_flags.add(*serve, "--listen", "listen", "host:port (port 0 picks a free one)", "127.0.0.1:7600");
  serve_flags.add(*serve, "--trajectory", "trajectory", "Replay: trajectory file");
  serve_flags.add(*serve, "--images", "images", "Replay: image directory");
  serve_flags.add(*serve, "--pairing-tolerance", "pairing_tolerance", "Replay: max timestamp gap (s)", "0.02");
  serve_flags.add(*serve, "--sim-kind", "sim_kind", "Simulate: planar_2dof | smooth_6dof", "smooth_6dof");
  serve_flags.add(*serve, "--sim-steps", "sim_steps", "Simulate: events", "2000");
  serve_flags.add(*serve, "--sim-seed", "sim_seed", "Simulate: seed", "1");
  serve_flags.add(*serve, "--sigma-t", "sigma_t", "Simulate: translation drift per step", "0");
  serve_flags.add(*serve, "--sigma-r", "sigma_r", "Simulate: rotation drift per step (rad)", "0");
  serve_flags.add(*serve, "--rate", "rate_hz", "Source pacing in Hz (0 = unpaced)", "25");
  serve_flags.add(*serve, "--linger", "linger", "Seconds to keep serving after the source ends", "0");
  serve_flags.add(*serve, "--model", "model", "Robot mesh (.ply/.obj)", "bundled BlueROV2");
  serve_flags.add(*serve, "--model-scale", "model_scale", "Robot mesh scale", "1");
  serve_flags.add(*serve, "--jpeg-quality", "jpeg_quality", "JPEG quality 1-100", "80");
  add_session_flags(*serve, serve_flags);
  serve->add_flag("--print-config", print_config, "Print the effective config and exit");

  auto* check = app.add_subcommand("replay-check", "Validate a replay dataset without serving");
  fs::path check_traj, check_images;
  double check_tol = 0.02;
  check->add_option("--trajectory", check_traj, "Trajectory file")->required();
  check->add_option("--images", check_images, "Image directory")->required();
  check->add_option("--tolerance", check_tol, "Max timestamp gap (s)")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Reprojection sweeps and figure outputs");
  ValidateOptions vo;
  validate->add_option("--sweep", vo.sweep, "Comma-separated EOB distances f")->capture_default_str();
  validate->add_option("--out", vo.out, "Output directory")->capture_default_str();
  validate->add_option("--seed", vo.seed, "First noise seed")->capture_default_str();
  validate->add_option("--seeds", vo.seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
  validate->add_option("--sigma-t", vo.sigma_t, "Translation drift per step")->capture_default_str();
  validate->add_option("--steps", vo.steps, "Run length")->capture_default_str();
  validate->add_option("--buffer-size", vo.buffer_size, "Buffer capacity (0 = max f + 1)")->capture_default_str();
  validate->add_option("--pose-threshold", vo.pose_threshold, "Admission threshold")->capture_default_str();
  validate->add_option("--points", vo.points, "Robot samples for the cube figure")->capture_default_str();
  validate->add_option("--model", vo.model, "Robot mesh for the cube figure (default: bundled TurtleBot 4)");
  validate->add_option("--cube-size", vo.cube_size, "Cube edge length")->capture_default_str();
  bool no_figures = false;
  validate->add_flag("--no-figures", no_figures, "Skip the cube and logo images");

  auto* simulate = app.add_subcommand("simulate", "Generate and optionally record a synthetic dataset");
  SimulateOptions so;
  simulate->add_option("--kind", so.kind, "planar_2dof | smooth_6dof")->capture_default_str();
  simulate->add_option("--steps", so.steps, "Events")->capture_default_str();
  simulate->add_option("--landmarks", so.landmarks, "Scene landmarks")->capture_default_str();
  simulate->add_option("--seed", so.seed, "Scene and noise seed")->capture_default_str();
  simulate->add_option("--sigma-t", so.sigma_t, "Translation drift per step")->capture_default_str();
  simulate->add_option("--sigma-r", so.sigma_r, "Rotation drift per step (rad)")->capture_default_str();
  simulate->add_option("--out", so.out, "Record trajectory, ground truth, scene and images here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto active = app.get_subcommands();
    std::cerr << "error: " << e.what() << "\n\n" << (active.empty() ? app.help() : active.back()->help());
    return 2;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  vo.figures = !no_figures;

  try {
    if (serve->parsed()) return cmd_serve(config_path, serve_flags, print_config);
    if (check->parsed()) return cmd_replay_check(check_traj, check_images, check_tol);
    if (validate->parsed()) return cmd_validate(vo);
    if (simulate->parsed()) return cmd_simulate(so);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
