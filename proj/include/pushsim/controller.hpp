#pragma once

// Force-feedback straight-line pushing controller.
//
// The pusher moves at constant speed; only its heading is controlled:
//   theta_p = (k_f + 1) theta_f + k_y y_c
// where theta_f is the heading of the measured contact force and y_c the
// lateral offset of the contact point, both in the path frame.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "pushsim/dynamics.hpp"
#include "pushsim/errors.hpp"
#include "pushsim/geometry.hpp"

namespace pushsim {

struct Gains {
  double k_f = 0.1;
  double k_y = 0.01;  // rad/m
  double speed = 0.1; // m/s

  void validate() const {
    if (!(k_f > 0.0) || !std::isfinite(k_f)) throw ConfigError("k_f", "k_f must be > 0");
    if (!(k_y > 0.0) || !std::isfinite(k_y)) throw ConfigError("k_y", "k_y must be > 0");
    if (!(speed > 0.0) || !std::isfinite(speed)) throw ConfigError("speed", "speed must be > 0");
  }
};

/// Desired straight-line path: the x-axis of this frame.
struct PathFrame {
  Vec2 origin = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();

  static PathFrame along(const Vec2& origin, const Vec2& direction) {
    const double n = direction.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("direction", "path direction must be non-zero");
    return {origin, direction / n};
  }

  /// World vector expressed in path coordinates.
  Vec2 to_path(const Vec2& v) const { return {direction.dot(v), cross(direction, v)}; }
  Vec2 to_world(const Vec2& v) const { return v.x() * direction + v.y() * rot90(direction); }

  /// Signed lateral offset of a world point from the path line.
  double lateral(const Vec2& point) const { return cross(direction, point - origin); }
};

inline constexpr double kDefaultForceDeadband = 1e-6;

/// Heading of the world-frame force in the path frame, or prev_theta_f when the force is below the deadband.
inline double force_angle(const Vec2& f_world, double prev_theta_f, const PathFrame& path = {},
                          double deadband = kDefaultForceDeadband) {
  if (!(f_world.norm() >= deadband)) return prev_theta_f;
  const Vec2 f = path.to_path(f_world);
  return std::atan2(f.y(), f.x());
}

inline double pushing_angle(double theta_f, double y_c, const Gains& g) {
  return (g.k_f + 1.0) * theta_f + g.k_y * y_c;
}

/// World-frame pusher velocity with magnitude g.speed and heading theta_p relative to the path.
inline Vec2 pusher_velocity(double theta_p, const Gains& g, const PathFrame& path = {}) {
  return path.to_world(g.speed * Vec2(std::cos(theta_p), std::sin(theta_p)));
}

/// One controller instance per simulation run; holds the last valid force heading.
class PushController {
 public:
  struct Command {
    double theta_f;
    double theta_p;
    Vec2 velocity;  // world frame
  };

  PushController(Gains gains, PathFrame path, double force_noise = 0.0, std::uint64_t seed = 0)
      : gains_(gains), path_(path), noise_(force_noise), rng_(seed) {
    gains_.validate();
    if (!(force_noise >= 0.0)) throw ConfigError("force_noise", "force_noise must be >= 0");
  }

  /// Command for the measured world force (nullopt before the first measurement) and contact point.
  Command update(const std::optional<Vec2>& f_world, const Vec2& contact_world) {
    if (f_world) {
      Vec2 f = *f_world;
      if (noise_ > 0.0) {
        std::uniform_real_distribution<double> u(-noise_, noise_);
        f += Vec2(u(rng_), u(rng_));
      }
      theta_f_ = force_angle(f, theta_f_, path_);
    }
    const double theta_p = pushing_angle(theta_f_, path_.lateral(contact_world), gains_);
    return {theta_f_, theta_p, pusher_velocity(theta_p, gains_, path_)};
  }

  const Gains& gains() const { return gains_; }
  const PathFrame& path() const { return path_; }

 private:
  Gains gains_;
  PathFrame path_;
  double noise_;
  std::mt19937_64 rng_;
  double theta_f_ = 0.0;
};

}  // namespace pushsim
