#include <doctest.h>

#include <random>

#include "egoexo/errors.hpp"
#include "egoexo/geom/transfer.hpp"
#include "support/random_geometry.hpp"

using namespace egoexo;
using namespace egoexo::geom;
using egoexo::testing::random_pose;
using egoexo::testing::random_vector;
using egoexo::testing::rot_z;

namespace {

Point3Set cloud_of(std::initializer_list<Eigen::Vector3d> pts) {
  Point3Set c;
  c.points.assign(pts.begin(), pts.end());
  return c;
}

Pose pose_of(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
  Pose p;
  p.rotation = r;
  p.translation = t;
  return p;
}

void check_close(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double tol = 1e-12) {
  CHECK((a - b).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace

TEST_CASE("transfer_points: identity relative pose leaves the cloud unchanged") {
  std::mt19937_64 rng(7);
  const Pose p = random_pose(rng);
  Point3Set cloud;
  for (int i = 0; i < 20; ++i) cloud.points.push_back(random_vector(rng, 3.0));
  for (auto mode : {TransferMode::standard, TransferMode::paper_literal}) {
    const auto out = transfer_points(cloud, p, p, mode);
    REQUIRE(out.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) check_close(out.points[i], cloud.points[i]);
  }
}

TEST_CASE("transfer_points: pure translation along z") {
  const auto cloud = cloud_of({{0, 0, 0}});
  const Pose cur = pose_of(Eigen::Matrix3d::Identity(), {0, 0, 2});
  const Pose ref = pose_of(Eigen::Matrix3d::Identity(), {0, 0, 0});
  for (auto mode : {TransferMode::standard, TransferMode::paper_literal})
    check_close(transfer_points(cloud, cur, ref, mode).points[0], {0, 0, 2});
}

TEST_CASE("transfer_points: the two modes diverge under a rotated reference") {
  // Reference rotated +90 deg about z; (t_c - t_r) = (1,0,0).
  // literal keeps it in world axes, standard rotates it by Rz(-90).
  const auto cloud = cloud_of({{0, 0, 0}});
  const Pose cur = pose_of(Eigen::Matrix3d::Identity(), {1, 0, 0});
  const Pose ref = pose_of(rot_z(90), {0, 0, 0});
  check_close(transfer_points(cloud, cur, ref, TransferMode::paper_literal).points[0], {1, 0, 0});
  check_close(transfer_points(cloud, cur, ref, TransferMode::standard).points[0], {0, -1, 0});
}

TEST_CASE("transfer_points: colors pass through") {
  Point3Set cloud = cloud_of({{1, 2, 3}, {4, 5, 6}});
  cloud.colors = std::vector<Rgb>{{1, 2, 3}, {9, 8, 7}};
  std::mt19937_64 rng(3);
  const auto out = transfer_points(cloud, random_pose(rng), random_pose(rng));
  REQUIRE(out.colors.has_value());
  CHECK(*out.colors == *cloud.colors);
}

TEST_CASE("transfer_points: non-orthonormal rotation is rejected") {
  Pose bad;
  bad.rotation(0, 0) = 1.1;
  CHECK_THROWS_AS(transfer_points(cloud_of({{0, 0, 1}}), bad, Pose{}), ValidationError);
  CHECK_THROWS_AS(transfer_points(cloud_of({{0, 0, 1}}), Pose{}, bad), ValidationError);
}

TEST_CASE("property: standard transfer A->B->A is identity within 1e-9") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    Point3Set cloud;
    for (int i = 0; i < 10; ++i) cloud.points.push_back(random_vector(rng, 10.0));
    const auto there = transfer_points(cloud, a, b, TransferMode::standard);
    const auto back = transfer_points(there, b, a, TransferMode::standard);
    for (std::size_t i = 0; i < cloud.size(); ++i)
      CHECK((back.points[i] - cloud.points[i]).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("property: modes agree exactly when the reference rotation is identity") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose cur = random_pose(rng);
    Pose ref = random_pose(rng);
    ref.rotation.setIdentity();
    Point3Set cloud;
    for (int i = 0; i < 10; ++i) cloud.points.push_back(random_vector(rng, 10.0));
    const auto s = transfer_points(cloud, cur, ref, TransferMode::standard);
    const auto l = transfer_points(cloud, cur, ref, TransferMode::paper_literal);
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(s.points[i] == l.points[i]);
  }
}

TEST_CASE("project_points: pinhole arithmetic") {
  CameraIntrinsics k;  // fx=fy=500, cx=320, cy=240
  const auto px = project_points(cloud_of({{0, 0, 1}, {1, 0.5, 2}, {0, 0, -1}}), k, 1.0);
  REQUIRE(px.size() == 2);
  CHECK(px[0].u == doctest::Approx(320.0).epsilon(1e-15));
  CHECK(px[0].v == doctest::Approx(240.0).epsilon(1e-15));
  CHECK(px[0].index == 0);
  // u = 500 * 0.5 + 320, v = 500 * 0.25 + 240
  CHECK(px[1].u == doctest::Approx(570.0).epsilon(1e-15));
  CHECK(px[1].v == doctest::Approx(365.0).epsilon(1e-15));
  CHECK(px[1].depth == 2.0);
  CHECK(px[1].index == 1);
}

TEST_CASE("project_points: lambda1 cancels in pixel coordinates") {
  CameraIntrinsics k;
  std::mt19937_64 rng(5);
  Point3Set cloud;
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d p = random_vector(rng, 2.0);
    p.z() = std::abs(p.z()) + 0.1;
    cloud.points.push_back(p);
  }
  const auto a = project_points(cloud, k, 1.0);
  const auto b = project_points(cloud, k, 3.7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == doctest::Approx(b[i].u).epsilon(1e-14));
    CHECK(a[i].v == doctest::Approx(b[i].v).epsilon(1e-14));
  }
  CHECK_THROWS_AS(project_points(cloud, k, 0.0), ValidationError);
}

TEST_CASE("property: projected count equals points beyond epsilon depth") {
  CameraIntrinsics k;
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Point3Set cloud;
    std::size_t expected = 0;
    for (int i = 0; i < 200; ++i) {
      Eigen::Vector3d p = random_vector(rng, 1.0);
      if (i % 17 == 0) p.z() = kEpsilonDepth;  // boundary: culled
      if (p.z() > kEpsilonDepth) ++expected;
      cloud.points.push_back(p);
    }
    CHECK(project_points(cloud, k).size() == expected);
  }
}

TEST_CASE("place_in_map: evaluations of lambda2 * R * p + t") {
  const auto unit_x = cloud_of({{1, 0, 0}});
  check_close(place_in_map(unit_x, Pose{}, 1.0).points[0], {1, 0, 0});
  check_close(place_in_map(unit_x, pose_of(Eigen::Matrix3d::Identity(), {1, 1, 1}), 2.0).points[0],
              {3, 1, 1});
  check_close(place_in_map(unit_x, pose_of(rot_z(90), {0, 0, 0}), 1.0).points[0], {0, 1, 0});
  CHECK_THROWS_AS(place_in_map(unit_x, Pose{}, -1.0), ValidationError);
}

TEST_CASE("property: doubling lambda2 doubles the offset from the camera center") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose p = random_pose(rng);
    Point3Set cloud;
    for (int i = 0; i < 10; ++i) cloud.points.push_back(random_vector(rng, 2.0));
    const double l2 = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    const auto a = place_in_map(cloud, p, l2);
    const auto b = place_in_map(cloud, p, 2.0 * l2);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Eigen::Vector3d da = a.points[i] - p.translation;
      const Eigen::Vector3d db = b.points[i] - p.translation;
      CHECK((db - 2.0 * da).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + p.translation.norm()));
    }
  }
}
