#pragma once

// Brute-force reference for solve_motion and the randomized equivalence check.
//
// The reference never forms K^-1 and never enumerates contact modes: it sweeps
// the force direction across the friction cone on a uniform angle grid, solves
// the 2x2 velocity constraint for each direction, and keeps the feasible
// direction with the smallest slip. When the slip changes sign between two
// neighbouring grid directions the zero crossing is located by bisection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pushsim/dynamics.hpp"
#include "pushsim/geometry.hpp"

namespace pushsim::oracle {

struct Reference {
  bool feasible = false;
  double alpha = 0.0;
  Vec3 twist = Vec3::Zero();
  Vec2 eta = Vec2::Zero();
};

namespace detail {

struct Sample {
  bool feasible = false;
  double beta = 0.0;
  double alpha = 0.0;
  Vec2 direction = Vec2::Zero();
};

inline Sample sample(const Mat3& m, const ContactMap& w, const ContactFrame& cf, const Vec2& v_p, double psi) {
  Sample out;
  out.direction = std::cos(psi) * cf.n_hat + std::sin(psi) * cf.t_hat;
  // columns: contact velocity produced by a unit force along the direction, and the slip axis
  Eigen::Matrix2d a;
  a.col(0) = w.transpose() * (m * (w * out.direction));
  a.col(1) = cf.t_hat;
  const double det = a.determinant();
  if (!(std::abs(det) > 1e-14 * a.norm())) return out;
  out.beta = (a(1, 1) * v_p.x() - a(0, 1) * v_p.y()) / det;
  out.alpha = (a(0, 0) * v_p.y() - a(1, 0) * v_p.x()) / det;
  out.feasible = out.beta >= 0.0;
  return out;
}

}  // namespace detail

inline Reference brute_force_motion(const LimitSurface& ls, const ContactFrame& cf, const Vec2& v_p,
                                    std::size_t directions = 100000) {
  const Mat3 m = ls.M();
  const ContactMap w = contact_map(cf.c);
  const double half = std::atan(cf.mu_c);
  const std::size_t n = half > 0.0 ? std::max<std::size_t>(directions, 2) : 1;
  auto angle = [&](std::size_t i) { return n == 1 ? 0.0 : -half + 2.0 * half * static_cast<double>(i) / (n - 1); };

  std::vector<detail::Sample> grid(n);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = detail::sample(m, w, cf, v_p, angle(i));
    if (!grid[i].feasible) continue;
    if (!best || std::abs(grid[i].alpha) < std::abs(grid[best.value()].alpha)) best = i;
  }
  Reference ref;
  if (!best) return ref;

  detail::Sample chosen = grid[*best];
  // refine a sign change of alpha next to the best grid point
  for (std::size_t j : {*best, *best + 1}) {
    if (j == 0 || j >= n) continue;
    const auto& lo = grid[j - 1];
    const auto& hi = grid[j];
    if (!lo.feasible || !hi.feasible || (lo.alpha > 0.0) == (hi.alpha > 0.0)) continue;
    double a = angle(j - 1);
    double b = angle(j);
    const bool lo_positive = lo.alpha > 0.0;
    for (int it = 0; it < 200 && a < b; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const auto s = detail::sample(m, w, cf, v_p, mid);
      ((s.alpha > 0.0) == lo_positive ? a : b) = mid;
    }
    const auto s = detail::sample(m, w, cf, v_p, 0.5 * (a + b));
    if (s.feasible && std::abs(s.alpha) < std::abs(chosen.alpha)) chosen = s;
  }
  ref.feasible = true;
  ref.alpha = chosen.alpha;
  ref.eta = chosen.beta * chosen.direction;
  ref.twist = m * (w * ref.eta);
  return ref;
}

/// One randomized solve_motion input.
struct Instance {
  double f_max = 1.0;
  double tau_max = 1.0;
  ContactFrame contact;
  Vec2 v_p = Vec2::Zero();

  nlohmann::json to_json() const {
    return {
        {"f_max", f_max},
        {"tau_max", tau_max},
        {"mu_c", contact.mu_c},
        {"c", {contact.c.x(), contact.c.y()}},
        {"n_hat", {contact.n_hat.x(), contact.n_hat.y()}},
        {"v_p", {v_p.x(), v_p.y()}},
    };
  }
};

/// Contact on the boundary of a random convex slider: contact distance in
/// [0.05, 1] m, inward normal within 60 degrees of the direction to the CoM,
/// mu_c in [0, 2], tau_max in [0.01, 1], and a pusher velocity with
/// n_hat . v_p > 0 (or < 0 when `separating`).
inline Instance random_instance(std::mt19937_64& rng, bool separating = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  Instance inst;
  inst.f_max = 1.0;
  inst.tau_max = 0.01 + 0.99 * unit(rng);
  const double c_angle = two_pi * unit(rng);
  const double c_dist = 0.05 + 0.95 * unit(rng);
  inst.contact.c = c_dist * Vec2(std::cos(c_angle), std::sin(c_angle));
  const double tilt = (unit(rng) - 0.5) * (2.0 * std::numbers::pi / 3.0);
  inst.contact.n_hat = rotation(tilt) * (-inst.contact.c / c_dist);
  inst.contact.t_hat = rot90(inst.contact.n_hat);
  inst.contact.mu_c = 2.0 * unit(rng);
  // heading relative to the normal, strictly inside the open half-plane
  const double heading = (unit(rng) - 0.5) * 0.98 * std::numbers::pi + (separating ? std::numbers::pi : 0.0);
  const double speed = 0.01 + unit(rng);
  inst.v_p = speed * (rotation(heading) * inst.contact.n_hat);
  return inst;
}

using Solver = std::function<MotionResult(const LimitSurface&, const ContactFrame&, const Vec2&)>;

struct CheckReport {
  std::size_t count = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;  // max over instances of |error| / max(1, |reference|)
  std::optional<Instance> first_failure;
  nlohmann::json first_failure_detail;
};

inline constexpr double kCheckTolerance = 1e-5;

/// Compares `solver` against the brute-force reference on `count` random instances.
inline CheckReport run_check(std::uint64_t seed, std::size_t count, const Solver& solver = solve_motion,
                             std::size_t directions = 100000) {
  std::mt19937_64 rng(seed);
  CheckReport report;
  report.count = count;
  for (std::size_t i = 0; i < count; ++i) {
    const Instance inst = random_instance(rng);
    const LimitSurface ls(inst.f_max, inst.tau_max);
    const MotionResult got = solver(ls, inst.contact, inst.v_p);
    const Reference ref = brute_force_motion(ls, inst.contact, inst.v_p, directions);

    double dev = std::numeric_limits<double>::infinity();
    if (ref.feasible && got.mode != ContactMode::Separating) {
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
      dev = rel(got.alpha, ref.alpha);
      for (int k = 0; k < 3; ++k) dev = std::max(dev, rel(got.twist(k), ref.twist(k)));
    }
    report.max_deviation = std::max(report.max_deviation, dev);
    if (!(dev <= kCheckTolerance)) {
      if (report.failures++ == 0) {
        report.first_failure = inst;
        report.first_failure_detail = {
            {"index", i},
            {"instance", inst.to_json()},
            {"solver", {{"mode", to_string(got.mode)},
                        {"alpha", got.alpha},
                        {"twist", {got.twist(0), got.twist(1), got.twist(2)}}}},
            {"reference", {{"feasible", ref.feasible},
                           {"alpha", ref.alpha},
                           {"twist", {ref.twist(0), ref.twist(1), ref.twist(2)}}}},
        };
      }
    }
  }
  return report;
}

}  // namespace pushsim::oracle
