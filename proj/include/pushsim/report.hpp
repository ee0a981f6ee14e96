#pragma once

// CSV and JSON writers. Numbers are written with std::to_chars so output does
// not depend on the process locale.

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pushsim/sim.hpp"
#include "pushsim/sweep.hpp"

namespace pushsim::report {

inline constexpr int kSignificantDigits = 9;

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, kSignificantDigits);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kTrajectoryHeader = "t,x,y,phi,s,fx,fy,theta_f,theta_p,alpha,mode";

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : traj.records) {
    for (double v : {r.t, r.state.x, r.state.y, r.state.phi, r.state.s, r.force.x(), r.force.y(), r.theta_f,
                     r.theta_p, r.alpha}) {
      out << format_number(v) << ',';
    }
    out << to_string(r.mode) << '\n';
  }
}

inline constexpr const char* kSummaryHeader =
    "index,y0,s0,phi0,mu_c,tau_max,final_y_c,max_abs_y,status,status_time,slip_fraction";

inline void write_summary_csv(std::ostream& out, const std::vector<SweepResult>& results) {
  out << kSummaryHeader << '\n';
  for (const auto& r : results) {
    out << r.combo.index;
    for (double v : {r.combo.y0, r.combo.s0, r.combo.phi0, r.combo.mu_c, r.combo.tau_max, r.summary.final_y_c,
                     r.summary.max_abs_y}) {
      out << ',' << format_number(v);
    }
    out << ',' << to_string(r.summary.status.kind) << ',' << format_number(r.summary.status.time) << ','
        << format_number(r.summary.slip_fraction) << '\n';
  }
}

inline nlohmann::json to_json(const RunSummary& s, const Trajectory& traj) {
  nlohmann::json out = {
      {"status", to_string(s.status.kind)},
      {"status_time", s.status.time},
      {"records", s.steps},
      {"final_y_c", s.final_y_c},
      {"final_y", s.final_y},
      {"max_abs_y", s.max_abs_y},
      {"slip_fraction", s.slip_fraction},
      {"stick_fraction", s.stick_fraction},
      {"corner_events", s.corner_events},
      {"max_limit_surface_error", s.max_load_error},
  };
  if (!traj.records.empty()) {
    const auto& last = traj.records.back();
    out["final_state"] = {{"t", last.t}, {"x", last.state.x}, {"y", last.state.y}, {"phi", last.state.phi},
                          {"s", last.state.s}};
  }
  return out;
}

}  // namespace pushsim::report
