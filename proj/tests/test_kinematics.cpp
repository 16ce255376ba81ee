#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cranerl/kinematics.hpp"
#include "cranerl/rng.hpp"
#include "test_util.hpp"

using namespace cranerl;

namespace {
Vec6 make_q(double q1, double q2, double q3, double q4, double q5, double q6) {
  Vec6 q;
  q << q1, q2, q3, q4, q5, q6;
  return q;
}
}  // namespace

TEST_CASE("straight arm at zero configuration") {
  CraneModel model;
  const auto f = forward_kinematics(make_q(0, 0, 0, 0, 0, 0.5), model);
  CHECK(f.tip.translation().isApprox(Vec3(5.0, 0.0, 1.5), 1e-12));
  CHECK(f.elbow.translation().isApprox(Vec3(3.0, 0.0, 1.5), 1e-12));
}

TEST_CASE("full telescope reaches 7 m") {
  CraneModel model;
  const auto f = forward_kinematics(make_q(0, 0, 0, 2.0, 0, 0.5), model);
  CHECK(f.tip.translation().isApprox(Vec3(7.0, 0.0, 1.5), 1e-12));
}

TEST_CASE("bent configuration matches the transform oracle") {
  CraneModel model;
  const Vec6 q = make_q(M_PI / 2.0, 0.5, -1.0, 1.0, 0.0, 0.5);
  const auto f = forward_kinematics(q, model);
  // Frozen from the independent 4x4 composition.
  CHECK(std::abs(f.tip.translation().x()) <= 1e-9);
  CHECK(f.tip.translation().y() == doctest::Approx(5.2654953713422366).epsilon(1e-12));
  CHECK(f.tip.translation().z() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.elbow.translation().y() == doctest::Approx(2.6327476856711183).epsilon(1e-12));
  CHECK(f.elbow.translation().z() == doctest::Approx(2.9382766158126090).epsilon(1e-12));

  const auto pts = oracle::chain_points(q, model);
  CHECK((f.tip.translation() - pts.tip).norm() <= 1e-9);
  CHECK((f.elbow.translation() - pts.elbow).norm() <= 1e-9);
}

TEST_CASE("forward kinematics matches the oracle on 1000 random configurations") {
  CraneModel model;
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec6 q;
    for (int i = 0; i < kNumJoints; ++i)
      q[i] = rng.uniform(model.joints[i].range_min, model.joints[i].range_max);
    const auto f = forward_kinematics(q, model);
    const auto pts = oracle::chain_points(q, model);
    REQUIRE((f.tip.translation() - pts.tip).norm() <= 1e-9);
    REQUIRE((f.elbow.translation() - pts.elbow).norm() <= 1e-9);
    REQUIRE((f.pillar_top.translation() - pts.pillar_top).norm() <= 1e-9);
  }
}

TEST_CASE("out-of-range joint positions are rejected") {
  CraneModel model;
  CHECK_THROWS_AS(forward_kinematics(make_q(0, 2.0, 0, 0, 0, 0), model), std::domain_error);
  CHECK_THROWS_AS(forward_kinematics(make_q(4.0, 0, 0, 0, 0, 0), model), std::domain_error);
  CHECK_THROWS_AS(forward_kinematics(make_q(0, 0, 0, -0.5, 0, 0), model), std::domain_error);
}

TEST_CASE("plumb pendulum hangs straight below the tip") {
  CraneModel model;
  const Vec6 q = make_q(0.3, 0.8, -1.2, 0.7, 0.4, 0.5);
  const auto f = forward_kinematics(q, model);
  const auto g = grapple_pose(q, 0.0, 0.0, model);
  CHECK((g.center - (f.tip.translation() - Vec3(0, 0, model.geometry.pendulum_length))).norm() <=
        1e-12);
  CHECK(g.yaw == doctest::Approx(0.3 + 0.4).epsilon(1e-12));
}

TEST_CASE("small swing angle gives the planar offset") {
  CraneModel model;
  const Vec6 q = make_q(0, 0.5, -0.5, 0, 0, 0.5);
  const auto f = forward_kinematics(q, model);
  const auto g = grapple_pose(q, 0.1, 0.0, model);
  const Vec3 offset = g.center - f.tip.translation();
  CHECK(offset.x() == doctest::Approx(model.geometry.pendulum_length * std::sin(0.1)).epsilon(1e-12));
  CHECK(std::abs(offset.y()) <= 1e-12);
  CHECK(offset.z() == doctest::Approx(-model.geometry.pendulum_length * std::cos(0.1)).epsilon(1e-12));
}

TEST_CASE("grapple pose matches the oracle on random states") {
  CraneModel model;
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    Vec6 q;
    for (int i = 0; i < kNumJoints; ++i)
      q[i] = rng.uniform(model.joints[i].range_min, model.joints[i].range_max);
    const double alpha = rng.uniform(-0.5, 0.5);
    const double beta = rng.uniform(-0.5, 0.5);
    const auto g = grapple_pose(q, alpha, beta, model);
    REQUIRE((g.center - oracle::grapple_center(q, alpha, beta, model)).norm() <= 1e-9);
  }
}

TEST_CASE("pendulum offset keeps the rod length") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
    CHECK(pendulum_offset_local(a, b, 0.8).norm() == doctest::Approx(0.8).epsilon(1e-12));
  }
}

TEST_CASE("horizontal reach at pillar height is the full arm") {
  CraneModel model;
  CHECK(horizontal_reach_at(1.5, model) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(horizontal_reach_at(2.5, model) == doctest::Approx(std::sqrt(49.0 - 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(horizontal_reach_at(20.0, model), std::domain_error);
}
