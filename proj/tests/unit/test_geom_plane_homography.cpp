#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "egoexo/errors.hpp"
#include "egoexo/geom/homography.hpp"
#include "egoexo/geom/plane.hpp"
#include "egoexo/geom/pose.hpp"
#include "egoexo/geom/warp.hpp"
#include "support/random_geometry.hpp"

using namespace egoexo;
using namespace egoexo::geom;

namespace {

Eigen::Vector2d apply_ref(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
  const double w = h(2, 0) * p.x() + h(2, 1) * p.y() + h(2, 2);
  return {(h(0, 0) * p.x() + h(0, 1) * p.y() + h(0, 2)) / w,
          (h(1, 0) * p.x() + h(1, 1) * p.y() + h(1, 2)) / w};
}

double frobenius_after_scale(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  // Compare up to scale and sign.
  const Eigen::Matrix3d an = a / a.norm();
  Eigen::Matrix3d bn = b / b.norm();
  if ((an - bn).norm() > (an + bn).norm()) bn = -bn;
  return (an - bn).norm();
}

}  // namespace

TEST_CASE("fit_plane: exact z = 0 points") {
  std::vector<Eigen::Vector3d> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 3, 0}, {-1, 4, 0}};
  const auto fit = fit_plane(pts);
  CHECK(std::abs(fit.plane.normal.z()) == doctest::Approx(1.0));
  CHECK(std::abs(fit.plane.offset) < 1e-15);
  CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("fit_plane: analytic plane x + y + z = 3") {
  std::vector<Eigen::Vector3d> pts{{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {1, 1, 1}, {2, -1, 2}, {5, -4, 2}};
  const auto fit = fit_plane(pts);
  const Eigen::Vector3d expected = Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0);
  CHECK((fit.plane.normal - expected).norm() < 1e-12);
  CHECK(fit.plane.offset == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("fit_plane: degenerate inputs") {
  std::vector<Eigen::Vector3d> two{{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(fit_plane(two), DegenerateInputError);
  std::vector<Eigen::Vector3d> line{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {5, 5, 5}};
  CHECK_THROWS_AS(fit_plane(line), DegenerateInputError);
}

TEST_CASE("property: fit_plane normal error scales with noise") {
  std::mt19937_64 rng(21);
  const Eigen::Vector3d n_true = Eigen::Vector3d(0.2, -0.4, 1.0).normalized();
  const double d_true = 1.5;
  const Eigen::Vector3d a = n_true.unitOrthogonal();
  const Eigen::Vector3d b = n_true.cross(a);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (double sigma : {0.0, 1e-4, 1e-3, 1e-2}) {
    std::normal_distribution<double> noise(0.0, sigma > 0 ? sigma : 1.0);
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < 400; ++i) {
      Eigen::Vector3d p = d_true * n_true + u(rng) * a + u(rng) * b;
      if (sigma > 0) p += n_true * noise(rng);
      pts.push_back(p);
    }
    const auto fit = fit_plane(pts);
    const double angle = std::acos(std::min(1.0, std::abs(fit.plane.normal.dot(n_true))));
    if (sigma == 0.0) {
      CHECK(fit.rms_residual < 1e-12);
      CHECK(angle < 1e-7);
    } else {
      // With 400 points spread over +-5 the normal error is far below sigma.
      CHECK(angle < 10.0 * sigma);
      CHECK(fit.rms_residual == doctest::Approx(sigma).epsilon(0.2));
    }
  }
}

TEST_CASE("estimate_homography: identity on the unit square") {
  std::vector<Eigen::Vector2d> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto h = estimate_homography(sq, sq);
  CHECK((h.h - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("estimate_homography: recovers a hand-chosen H0 from 6 points") {
  Eigen::Matrix3d h0;
  h0 << 1.2, 0.1, 15.0, -0.05, 0.9, -7.0, 1e-4, -2e-4, 1.0;
  std::vector<Eigen::Vector2d> src{{10, 20}, {300, 40}, {280, 260}, {30, 240}, {150, 130}, {200, 60}};
  std::vector<Eigen::Vector2d> dst;
  for (const auto& p : src) dst.push_back(apply_ref(h0, p));
  const auto h = estimate_homography(src, dst);
  CHECK(h.h(2, 2) == 1.0);
  CHECK(frobenius_after_scale(h.h, h0) < 1e-6);
}

TEST_CASE("estimate_homography: degenerate and malformed inputs") {
  std::vector<Eigen::Vector2d> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  std::vector<Eigen::Vector2d> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(estimate_homography(line, sq), DegenerateInputError);
  CHECK_THROWS_AS(estimate_homography(sq, line), DegenerateInputError);
  std::vector<Eigen::Vector2d> three{{0, 0}, {1, 0}, {1, 1}};
  CHECK_THROWS_AS(estimate_homography(three, three), ValidationError);
  CHECK_THROWS_AS(estimate_homography(sq, three), ValidationError);
}

TEST_CASE("property: random well-conditioned H0 recovered within 1e-6") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> small(-0.2, 0.2);
  std::uniform_real_distribution<double> persp(-5e-4, 5e-4);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::uniform_real_distribution<double> coord(0.0, 640.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix3d h0;
    h0 << 1.0 + small(rng), small(rng), shift(rng), small(rng), 1.0 + small(rng), shift(rng),
        persp(rng), persp(rng), 1.0;
    std::vector<Eigen::Vector2d> src, dst;
    for (int i = 0; i < 8; ++i) {
      src.emplace_back(coord(rng), coord(rng) * 0.75);
      dst.push_back(apply_ref(h0, src.back()));
    }
    CHECK(frobenius_after_scale(estimate_homography(src, dst).h, h0) < 1e-6);
  }
}

TEST_CASE("Homography: inverse and composition") {
  Eigen::Matrix3d m;
  m << 1.1, 0.2, 3.0, -0.1, 0.95, 4.0, 1e-4, 2e-4, 1.0;
  const auto h = Homography::normalized(m);
  const Eigen::Vector2d p(12.0, 34.0);
  CHECK((h.inverse().apply(h.apply(p)) - p).norm() < 1e-9);
  CHECK(((h * h.inverse()).h - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

namespace {

RgbImage gradient_image(int w, int h) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      set_rgb(img, x, y,
              {static_cast<std::uint8_t>(x * 7 % 256), static_cast<std::uint8_t>(y * 5 % 256),
               static_cast<std::uint8_t>((x + y) % 256)});
  return img;
}

}  // namespace

TEST_CASE("warp_image: identity warp reproduces the input") {
  const RgbImage src = gradient_image(40, 30);
  const auto out = warp_image(src, Homography{}, {0, 0, 40, 30});
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) {
      const auto* o = out.pixel(x, y);
      const auto* s = src.pixel(x, y);
      REQUIRE(o[3] == 255);
      CHECK((o[0] == s[0] && o[1] == s[1] && o[2] == s[2]));
    }
}

TEST_CASE("warp_image: pure translation shifts right by 10 px") {
  const RgbImage src = gradient_image(40, 30);
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 2) = 10.0;
  const auto out = warp_image(src, Homography::normalized(t), {0, 0, 40, 30});
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) {
      const auto* o = out.pixel(x, y);
      if (x < 10) {
        CHECK(o[3] == 0);
        continue;
      }
      const auto* s = src.pixel(x - 10, y);
      CHECK(o[3] == 255);
      CHECK((o[0] == s[0] && o[1] == s[1] && o[2] == s[2]));
    }
}

TEST_CASE("warp_image: logo quad lands on the target quad") {
  // Flat-colored logo; corners of its extent map onto a target quadrilateral.
  RgbImage logo(64, 48);
  fill(logo, {200, 30, 30});
  const std::vector<Eigen::Vector2d> logo_quad{{0, 0}, {63, 0}, {63, 47}, {0, 47}};
  const std::vector<Eigen::Vector2d> target{{100, 80}, {180, 95}, {170, 160}, {95, 150}};
  const auto h = estimate_homography(logo_quad, target);
  for (std::size_t i = 0; i < 4; ++i) CHECK((h.apply(logo_quad[i]) - target[i]).norm() < 1e-6);

  const auto out = warp_image(logo, h, {0, 0, 256, 256});
  // Each target corner pixel is covered; a pixel well outside is not.
  for (const auto& c : target) {
    bool covered = false;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = static_cast<int>(std::lround(c.x())) + dx;
        const int y = static_cast<int>(std::lround(c.y())) + dy;
        if (out.pixel(x, y)[3] == 255 &&
            (Eigen::Vector2d(x, y) - c).norm() <= 0.5 + std::sqrt(2.0))
          covered = true;
      }
    CHECK(covered);
  }
  CHECK(out.pixel(10, 10)[3] == 0);
  CHECK(out.pixel(250, 250)[3] == 0);
}

TEST_CASE("composite_over respects alpha") {
  RgbImage dst(4, 4);
  fill(dst, {10, 10, 10});
  RgbaImage ov(2, 2);
  auto* p = ov.pixel(0, 0);
  p[0] = 250;
  p[3] = 255;
  composite_over(dst, ov, 1, 1);
  CHECK(get_rgb(dst, 1, 1) == Rgb{250, 0, 0});
  CHECK(get_rgb(dst, 2, 2) == Rgb{10, 10, 10});
  CHECK(get_rgb(dst, 0, 0) == Rgb{10, 10, 10});
}

TEST_CASE("Pose helpers") {
  std::mt19937_64 rng(41);
  const Pose p = egoexo::testing::random_pose(rng);
  CHECK(p.is_valid());
  const Pose round = Pose::from_quaternion(p.translation, p.quaternion(), p.timestamp);
  CHECK((round.rotation - p.rotation).cwiseAbs().maxCoeff() < 1e-12);
  const Pose id = compose(p, p.inverse());
  CHECK((id.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(id.translation.norm() < 1e-12);

  const Pose cam = look_at({0, 0, 5}, {0, 0, 0}, Eigen::Vector3d::UnitY());
  CHECK(cam.is_valid());
  CHECK((cam.to_camera({0, 0, 0}) - Eigen::Vector3d(0, 0, 5)).norm() < 1e-12);

  Pose neg;
  neg.timestamp = -1.0;
  CHECK_THROWS_AS(neg.validate(), ValidationError);
}
