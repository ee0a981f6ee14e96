#pragma once

// Closed-loop simulation: controller -> quasistatic dynamics -> Euler step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "pushsim/controller.hpp"
#include "pushsim/dynamics.hpp"
#include "pushsim/errors.hpp"
#include "pushsim/geometry.hpp"

namespace pushsim {

inline constexpr double kCornerMargin = 1e-9;

struct SimConfig {
  SliderShape shape = SliderShape::square(1.0);
  std::optional<EdgeId> edge;  // contact edge; the shape's default edge when unset
  double f_max = 1.0;
  double tau_max = 0.3826;
  double mu_c = 0.5;
  Gains gains;
  PathFrame path;
  double x0 = 0.0;
  double y0 = 0.0;
  double phi0 = 0.0;
  double s0 = 0.0;
  double dt = 0.01;
  double duration = 600.0;
  double force_noise = 0.0;  // half-width of uniform noise added to each force component (N)
  std::uint64_t seed = 0;

  EdgeId contact_edge() const { return edge.value_or(shape.default_edge()); }

  /// Number of integration steps; the trajectory holds one more record than this.
  std::size_t step_count() const { return static_cast<std::size_t>(std::floor(duration / dt + 1e-9)); }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "dt must be > 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration", "duration must be > 0");
    if (!(f_max > 0.0) || !std::isfinite(f_max)) throw ConfigError("f_max", "f_max must be > 0");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw ConfigError("tau_max", "tau_max must be > 0");
    if (!(mu_c >= 0.0) || !std::isfinite(mu_c)) throw ConfigError("mu", "mu must be >= 0");
    if (!(force_noise >= 0.0) || !std::isfinite(force_noise)) {
      throw ConfigError("force_noise", "force_noise must be >= 0");
    }
    gains.validate();
    if (std::abs(path.direction.norm() - 1.0) > 1e-12) throw ConfigError("direction", "path direction must be unit");
    for (double v : {x0, y0, phi0, s0}) {
      if (!std::isfinite(v)) throw ConfigError("initial_state", "initial state must be finite");
    }
    try {
      shape.check_edge(contact_edge());
    } catch (const OutOfEdge& e) {
      throw ConfigError("edge", e.what());
    }
    if (!shape.s_bounds(contact_edge()).contains(s0)) {
      throw ConfigError("s0", "s0 lies outside the contact edge");
    }
  }
};

struct TrajectoryRecord {
  double t = 0.0;
  SimState state;
  Vec2 contact = Vec2::Zero();  // contact point (= pusher position), world frame
  Vec2 force = Vec2::Zero();    // contact force, world frame
  double theta_f = 0.0;
  double theta_p = 0.0;
  double alpha = 0.0;
  ContactMode mode = ContactMode::Separating;
  double load = 0.0;  // p^T M p of the generalized contact force; 0 when separating
};

enum class TerminalKind { Completed, ContactLost, CornerReached };

inline std::string_view to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::Completed:
      return "completed";
    case TerminalKind::ContactLost:
      return "contact_lost";
    case TerminalKind::CornerReached:
      return "corner_reached";
  }
  return "unknown";
}

struct TerminalStatus {
  TerminalKind kind = TerminalKind::Completed;
  double time = 0.0;  // contact loss time, or first corner time; run end for Completed
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  TerminalStatus status;
  std::size_t corner_events = 0;
};

/// Runs one closed-loop push. Each record holds the state at time t together
/// with the command and contact solution applied over [t, t + dt]. The
/// controller sees the force recovered on the previous tick; on the first tick
/// it starts from theta_f = 0.
inline Trajectory run(const SimConfig& config) {
  config.validate();
  const LimitSurface ls(config.f_max, config.tau_max);
  const EdgeId edge = config.contact_edge();
  const Interval bounds = config.shape.s_bounds(edge);
  PushController controller(config.gains, config.path, config.force_noise, config.seed);

  SimState state{config.x0, config.y0, wrap_angle(config.phi0), config.s0};
  const std::size_t steps = config.step_count();

  Trajectory traj;
  traj.records.reserve(steps + 1);
  std::optional<Vec2> measured_force;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const ContactFrame cf = contact_frame_at(config.shape, state.s, edge, config.mu_c);
    const Mat2 rot = rotation(state.phi);
    const Vec2 contact_world = state.position() + rot * cf.c;

    const auto cmd = controller.update(measured_force, contact_world);
    const Vec2 v_p = rot.transpose() * cmd.velocity;
    const MotionResult motion = solve_motion(ls, cf, v_p);

    TrajectoryRecord rec;
    rec.t = t;
    rec.state = state;
    rec.contact = contact_world;
    rec.theta_f = cmd.theta_f;
    rec.theta_p = cmd.theta_p;
    rec.alpha = motion.alpha;
    rec.mode = motion.mode;

    if (motion.mode == ContactMode::Separating) {
      traj.records.push_back(rec);
      traj.status = {TerminalKind::ContactLost, t + config.dt};
      return traj;
    }

    rec.force = rot * motion.force;
    rec.load = ls.load(contact_map(cf.c) * motion.force);
    traj.records.push_back(rec);
    measured_force = rec.force;
    if (k == steps) break;

    state = step(state, motion, config.dt);
    if (bounds.bounded() && !bounds.contains(state.s)) {
      state.s = std::clamp(state.s, bounds.lo + kCornerMargin, bounds.hi - kCornerMargin);
      if (traj.corner_events++ == 0) {
        traj.status = {TerminalKind::CornerReached, t + config.dt};
      }
    }
  }
  if (traj.corner_events == 0) {
    traj.status = {TerminalKind::Completed, traj.records.back().t};
  }
  return traj;
}

/// Per-run figures of merit.
struct RunSummary {
  TerminalStatus status;
  std::size_t steps = 0;         // records
  double final_y_c = 0.0;        // lateral contact offset at the last record
  double final_y = 0.0;          // lateral CoM offset at the last record
  double max_abs_y = 0.0;        // over the whole run, CoM
  double slip_fraction = 0.0;    // fraction of records in a sliding mode
  double stick_fraction = 0.0;
  double tail_rise = 0.0;        // largest increase of |y_c| over its running minimum in the tail window
  double max_load_error = 0.0;   // max |p^T M p - 1| over non-separating records
  std::size_t audited_steps = 0; // records included in max_load_error
  std::size_t corner_events = 0;
};

inline RunSummary summarize(const Trajectory& traj, const PathFrame& path, double tail_window = 60.0) {
  RunSummary out;
  out.status = traj.status;
  out.corner_events = traj.corner_events;
  out.steps = traj.records.size();
  if (traj.records.empty()) return out;

  const auto& last = traj.records.back();
  out.final_y_c = path.lateral(last.contact);
  out.final_y = path.lateral(last.state.position());
  const double tail_start = last.t - tail_window;
  std::size_t slip = 0;
  std::size_t stick = 0;
  double tail_min = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.records) {
    out.max_abs_y = std::max(out.max_abs_y, std::abs(path.lateral(r.state.position())));
    if (is_sliding(r.mode)) ++slip;
    if (r.mode == ContactMode::Sticking) ++stick;
    if (r.mode != ContactMode::Separating) {
      out.max_load_error = std::max(out.max_load_error, std::abs(r.load - 1.0));
      ++out.audited_steps;
    }
    if (r.t >= tail_start - 1e-9) {
      const double y_c = std::abs(path.lateral(r.contact));
      tail_min = std::min(tail_min, y_c);
      out.tail_rise = std::max(out.tail_rise, y_c - tail_min);
    }
  }
  out.slip_fraction = static_cast<double>(slip) / static_cast<double>(out.steps);
  out.stick_fraction = static_cast<double>(stick) / static_cast<double>(out.steps);
  return out;
}

}  // namespace pushsim
