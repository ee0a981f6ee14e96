#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pushsim/controller.hpp"

using namespace pushsim;

TEST(ForceAngle, Basics) {
  EXPECT_DOUBLE_EQ(force_angle({1.0, 0.0}, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(force_angle({1.0, 1.0}, 0.0), std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(force_angle({0.0, 0.0}, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(force_angle({5e-7, 0.0}, -0.2), -0.2);
  EXPECT_DOUBLE_EQ(force_angle({-1.0, 0.0}, 0.0), std::numbers::pi);
}

TEST(ForceAngle, MeasuredInPathFrame) {
  const auto path = PathFrame::along({3.0, -1.0}, {0.0, 2.0});
  EXPECT_NEAR(force_angle({0.0, 1.0}, 0.0, path), 0.0, 1e-15);
  EXPECT_NEAR(force_angle({-1.0, 0.0}, 0.0, path), std::numbers::pi / 2, 1e-15);
}

TEST(PushingAngle, ControlLaw) {
  const Gains reference{0.1, 0.01, 0.1};
  EXPECT_DOUBLE_EQ(pushing_angle(0.0, 0.0, reference), 0.0);
  EXPECT_NEAR(pushing_angle(0.2, -0.4, reference), 0.216, 1e-15);
  EXPECT_NEAR(pushing_angle(0.0, 0.1, Gains{0.1, 0.3, 0.1}), 0.03, 1e-15);
  // no wrapping or clamping
  EXPECT_NEAR(pushing_angle(3.0, 0.0, reference), 3.3, 1e-15);
}

TEST(PushingAngle, SignStructureAndSuperposition) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Gains g{0.01 + std::abs(u(rng)), 0.01 + std::abs(u(rng)), 0.1};
    const double tf = u(rng), tf2 = u(rng), y = u(rng), y2 = u(rng);
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(pushing_angle(a * tf + b * tf2, a * y + b * y2, g),
                a * pushing_angle(tf, y, g) + b * pushing_angle(tf2, y2, g), 1e-12);
    const double positive = std::abs(tf) + 1e-3;
    EXPECT_GT(pushing_angle(positive, 0.0, g), positive);
    EXPECT_GT(pushing_angle(0.0, std::abs(y) + 1e-3, g), 0.0);
  }
}

TEST(PusherVelocity, PolarForm) {
  const Gains g{0.1, 0.01, 0.1};
  const Vec2 a = pusher_velocity(0.0, g);
  EXPECT_NEAR(a.x(), 0.1, 1e-15);
  EXPECT_NEAR(a.y(), 0.0, 1e-15);
  const Vec2 b = pusher_velocity(std::numbers::pi / 2, g);
  EXPECT_NEAR(b.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.y(), 0.1, 1e-15);
  const Vec2 c = pusher_velocity(0.0, g, PathFrame::along({0, 0}, {0, 1}));
  EXPECT_NEAR(c.x(), 0.0, 1e-15);
  EXPECT_NEAR(c.y(), 0.1, 1e-15);
}

TEST(PusherVelocity, ConstantSpeedAndFrameInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Gains g{0.1, 0.01, 0.37};
  for (int i = 0; i < 1000; ++i) {
    const double theta = u(rng);
    EXPECT_NEAR(pusher_velocity(theta, g).norm(), 0.37, 1e-15);

    // rotate path, force and contact by gamma: the command rotates by gamma
    const double gamma = u(rng);
    const Mat2 r = rotation(gamma);
    const Vec2 f(u(rng), u(rng));
    const Vec2 contact(u(rng), u(rng));
    PushController base(g, PathFrame{});
    PushController turned(g, PathFrame::along(Vec2::Zero(), r * Vec2::UnitX()));
    const auto c0 = base.update(f, contact);
    const auto c1 = turned.update(r * f, r * contact);
    EXPECT_NEAR(c0.theta_p, c1.theta_p, 1e-12);
    EXPECT_NEAR((r * c0.velocity - c1.velocity).norm(), 0.0, 1e-12);
  }
}

TEST(PushController, BootstrapsAndHoldsHeading) {
  PushController ctl(Gains{0.1, 0.01, 0.1}, PathFrame{});
  // first tick: no force measured yet, heading from the lateral term only
  auto cmd = ctl.update(std::nullopt, {-0.5, 0.4});
  EXPECT_DOUBLE_EQ(cmd.theta_f, 0.0);
  EXPECT_NEAR(cmd.theta_p, 0.004, 1e-15);
  cmd = ctl.update(Vec2(1.0, 1.0), {-0.5, 0.0});
  EXPECT_NEAR(cmd.theta_f, std::numbers::pi / 4, 1e-15);
  // a zero force keeps the previous heading
  cmd = ctl.update(Vec2(0.0, 0.0), {-0.5, 0.0});
  EXPECT_NEAR(cmd.theta_f, std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(cmd.theta_p, 1.1 * std::numbers::pi / 4, 1e-15);
}

TEST(PushController, NoiseIsSeededAndBounded) {
  const Gains g{0.1, 0.01, 0.1};
  PushController a(g, PathFrame{}, 0.05, 42);
  PushController b(g, PathFrame{}, 0.05, 42);
  for (int i = 0; i < 100; ++i) {
    const auto ca = a.update(Vec2(1.0, 0.0), Vec2::Zero());
    const auto cb = b.update(Vec2(1.0, 0.0), Vec2::Zero());
    EXPECT_EQ(ca.theta_f, cb.theta_f);
    EXPECT_LE(std::abs(ca.theta_f), std::atan2(0.05, 0.95) + 1e-12);
  }
}

TEST(Gains, Validation) {
  EXPECT_THROW((Gains{0.0, 0.01, 0.1}).validate(), ConfigError);
  EXPECT_THROW((Gains{0.1, -0.01, 0.1}).validate(), ConfigError);
  EXPECT_THROW((Gains{0.1, 0.01, 0.0}).validate(), ConfigError);
  EXPECT_THROW(PathFrame::along({0, 0}, {0, 0}), ConfigError);
}
