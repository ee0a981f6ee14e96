#pragma once

// Quasistatic pushing under an ellipsoidal limit surface.
//
// The equations of motion are the quadratic program
//
//   min alpha^2  s.t.  twist = M W eta,  v_p = W^T twist + alpha t_hat,  eta in FC
//
// Eliminating the twist leaves v_p = K eta + alpha t_hat with K = W^T M W, a
// one-parameter family in alpha. The set of alpha whose eta lands in the cone
// is an interval, so the minimum is either alpha = 0 (sticking) or an
// endpoint where eta lies on a cone edge. solve_motion enumerates exactly
// those candidates.

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/LU>

#include "pushsim/errors.hpp"
#include "pushsim/geometry.hpp"

namespace pushsim {

using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using ContactMap = Eigen::Matrix<double, 3, 2>;

/// Ellipsoidal limit surface p^T M p <= 1 with M = diag(f_max^-2, f_max^-2, tau_max^-2).
class LimitSurface {
 public:
  LimitSurface(double f_max, double tau_max) : f_max_(f_max), tau_max_(tau_max) {
    if (!(f_max > 0.0) || !std::isfinite(f_max)) throw ConfigError("f_max", "f_max must be > 0");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw ConfigError("tau_max", "tau_max must be > 0");
  }

  double f_max() const { return f_max_; }
  double tau_max() const { return tau_max_; }

  Vec3 diagonal() const {
    const double a = 1.0 / (f_max_ * f_max_);
    return {a, a, 1.0 / (tau_max_ * tau_max_)};
  }
  Mat3 M() const { return diagonal().asDiagonal(); }

  /// p^T M p for a generalized force p = (f_x, f_y, tau).
  double load(const Vec3& p) const { return p.dot(diagonal().cwiseProduct(p)); }

 private:
  double f_max_;
  double tau_max_;
};

/// Maps a body-frame contact force to the generalized force about the CoM;
/// its transpose maps the body twist to the velocity of the contact point.
inline ContactMap contact_map(const Vec2& c) {
  ContactMap w;
  w << 1.0, 0.0,  //
      0.0, 1.0,   //
      -c.y(), c.x();
  return w;
}

/// K = W^T M W, the map from force direction to contact-point velocity.
inline Mat2 contact_compliance(const LimitSurface& ls, const ContactMap& w) {
  return w.transpose() * ls.diagonal().asDiagonal() * w;
}

enum class ContactMode { Sticking, SlidingLeft, SlidingRight, Separating };

inline std::string_view to_string(ContactMode mode) {
  switch (mode) {
    case ContactMode::Sticking:
      return "sticking";
    case ContactMode::SlidingLeft:
      return "sliding_left";
    case ContactMode::SlidingRight:
      return "sliding_right";
    case ContactMode::Separating:
      return "separating";
  }
  return "unknown";
}

inline bool is_sliding(ContactMode mode) {
  return mode == ContactMode::SlidingLeft || mode == ContactMode::SlidingRight;
}

struct MotionResult {
  Vec3 twist = Vec3::Zero();  // (v_x, v_y, omega), body frame, about the CoM
  double alpha = 0.0;         // slip velocity along t_hat
  Vec2 eta = Vec2::Zero();    // force direction; twist = M W eta exactly
  Vec2 force = Vec2::Zero();  // contact force on the limit surface boundary
  Vec2 v_o = Vec2::Zero();    // slider velocity at the contact point
  ContactMode mode = ContactMode::Separating;
  bool grazing = false;  // |n_hat . v_p| < 1e-12: pusher moving tangentially to the edge
};

/// eta scaled so that the generalized force W eta lies on the limit surface boundary.
inline Vec2 recover_force(const LimitSurface& ls, const ContactMap& w, const Vec2& eta) {
  if (eta.x() == 0.0 && eta.y() == 0.0) {
    throw ZeroForceDirection("cannot recover a force from a zero direction");
  }
  const Mat2 k = contact_compliance(ls, w);
  return eta / std::sqrt(eta.dot(k * eta));
}

inline bool in_friction_cone(const ContactFrame& cf, const Vec2& eta, double slack = 0.0) {
  const double normal = cf.n_hat.dot(eta);
  return normal >= -slack && std::abs(cf.t_hat.dot(eta)) <= cf.mu_c * normal + slack;
}

namespace detail {

struct Candidate {
  Vec2 eta;
  double alpha;
  ContactMode mode;
};

// Solves beta * (K e) + alpha * t_hat = v_p for a cone edge e; nullopt when the
// edge is unusable (beta < 0, or K e parallel to t_hat).
inline std::optional<Candidate> edge_candidate(const Mat2& k, const ContactFrame& cf, const Vec2& edge,
                                               const Vec2& v_p) {
  const Vec2 ke = k * edge;
  const double det = cross(ke, cf.t_hat);
  if (std::abs(det) <= 1e-14 * ke.norm()) return std::nullopt;
  const double beta = cross(v_p, cf.t_hat) / det;
  const double alpha = cross(ke, v_p) / det;
  if (!(beta > 0.0)) return std::nullopt;
  const ContactMode mode = alpha > 0.0 ? ContactMode::SlidingLeft : ContactMode::SlidingRight;
  return Candidate{beta * edge, alpha, mode};
}

}  // namespace detail

/// Exact solution of the quasistatic equations of motion for pusher velocity v_p (body frame).
///
/// A pusher moving away from the contact (n_hat . v_p < 0) separates. When two
/// candidates tie in alpha^2 within 1e-12, sticking wins.
inline MotionResult solve_motion(const LimitSurface& ls, const ContactFrame& cf, const Vec2& v_p) {
  MotionResult result;
  const double approach = cf.n_hat.dot(v_p);
  result.grazing = std::abs(approach) < 1e-12;
  if (!(approach >= 0.0)) return result;

  const ContactMap w = contact_map(cf.c);
  const Mat2 k = contact_compliance(ls, w);

  std::optional<detail::Candidate> best;
  const Vec2 stick_eta = k.inverse() * v_p;
  const double cone_slack = 1e-12 * stick_eta.norm();
  if (in_friction_cone(cf, stick_eta, cone_slack)) {
    best = detail::Candidate{stick_eta, 0.0, ContactMode::Sticking};
  } else {
    const Vec2 upper = (cf.n_hat + cf.mu_c * cf.t_hat).normalized();
    const Vec2 lower = (cf.n_hat - cf.mu_c * cf.t_hat).normalized();
    auto consider = [&](const Vec2& edge) {
      auto cand = detail::edge_candidate(k, cf, edge, v_p);
      if (!cand) return;
      if (!best || cand->alpha * cand->alpha < best->alpha * best->alpha) best = cand;
    };
    consider(upper);
    if (cf.mu_c > 0.0) consider(lower);
  }
  if (!best || best->eta.isZero(0.0)) return result;

  result.eta = best->eta;
  result.alpha = best->alpha;
  result.mode = best->mode;
  result.twist = ls.diagonal().cwiseProduct(w * best->eta);
  result.v_o = w.transpose() * result.twist;
  result.force = best->eta / std::sqrt(best->eta.dot(k * best->eta));
  return result;
}

/// Slider pose in the world frame plus the contact parameter.
struct SimState {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;  // (-pi, pi]
  double s = 0.0;

  Vec2 position() const { return {x, y}; }
};

inline Mat2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

/// Explicit Euler step of the slider pose and contact parameter.
inline SimState step(const SimState& state, const MotionResult& motion, double dt) {
  if (motion.mode == ContactMode::Separating) {
    throw SeparatingStep("cannot integrate a separating contact");
  }
  if (!(dt > 0.0)) throw ConfigError("dt", "dt must be > 0");
  const Vec2 v_world = rotation(state.phi) * motion.twist.head<2>();
  SimState next;
  next.x = state.x + dt * v_world.x();
  next.y = state.y + dt * v_world.y();
  next.phi = wrap_angle(state.phi + dt * motion.twist.z());
  next.s = state.s + dt * motion.alpha;
  return next;
}

}  // namespace pushsim
