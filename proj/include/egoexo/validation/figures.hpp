#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "egoexo/exo/synthesis.hpp"
#include "egoexo/geom/plane.hpp"
#include "egoexo/sim/scene.hpp"
#include "egoexo/validation/drift_study.hpp"
#include "egoexo/validation/logo.hpp"

namespace egoexo::validation {

/// Shared setup for the cube and logo figures: a simulated run, a current
/// frame and a reference frame f steps earlier, and a floor tag placed
/// ahead of both cameras.
struct FigureSetup {
  std::vector<geom::Pose> truth;
  std::vector<geom::Pose> estimate;
  sim::Scene scene;
  geom::CameraIntrinsics intrinsics;
  std::size_t current = 0;
  std::size_t reference = 0;
  double camera_height = 0.0;
};

/// Uses the run described by `params.simulation` (planar runs only; the
/// camera height comes from its planar params). Throws ValidationError
/// when current < f or current is past the run.
FigureSetup make_figure_setup(const DriftStudyParams& params, long long f, std::size_t current,
                              double tag_size = 0.6);

struct CubeFigure {
  geom::Plane plane;
  exo::ExoView exo;
  RgbImage image;
};

/// Ground plane from the estimated camera centers up to the current frame,
/// the exo view at the reference frame with `cloud` splatted in, and a
/// wireframe cube of `cube_size` standing on the plane, 2 units ahead of
/// the reference camera and 0.8 to its right.
CubeFigure render_cube_figure(const FigureSetup& setup, const geom::Point3Set& cloud,
                              const exo::RenderConfig& cfg, double cube_size);

struct LogoFigure {
  LogoProjection projection;
  /// Tag corners projected straight into the reference camera.
  std::array<Eigen::Vector2d, 4> analytic_exo;
  double max_corner_error = 0.0;
};

/// Detects the tag in the current (ego) and reference (exo) renders and
/// carries `logo` across. Throws NoDataError when the tag is not fully in
/// view in both frames.
LogoFigure render_logo_figure(const FigureSetup& setup, const RgbImage& logo);

}  // namespace egoexo::validation
