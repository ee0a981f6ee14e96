#pragma once

// Command-line front end: simulate, sweep and check.
//
// Exit codes: 0 ok, 1 config error, 2 contact lost (simulate), 3 some sweep run
// did not complete, 4 oracle check failed.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pushsim/config.hpp"
#include "pushsim/oracle.hpp"
#include "pushsim/report.hpp"
#include "pushsim/sim.hpp"
#include "pushsim/sweep.hpp"
#include "pushsim/version.hpp"

namespace pushsim::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kContactLost = 2,
  kSweepFailures = 3,
  kCheckFailed = 4,
};

namespace fs = std::filesystem;

namespace detail {

inline std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("out", "cannot write '" + path.string() + "'");
  return out;
}

inline void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// The fixed slider used by `sweep square` / `sweep circle` with the reference gains and timing.
inline SimConfig sweep_base(const std::string& slider) {
  SimConfig base;
  if (slider == "square") {
    base.shape = SliderShape::square(1.0);
  } else if (slider == "circle") {
    base.shape = SliderShape::circle(0.5);
  } else {
    throw ConfigError("slider", "slider must be 'square' or 'circle', got '" + slider + "'");
  }
  base.f_max = 1.0;
  base.tau_max = base.f_max * mean_support_distance(base.shape);
  base.gains = Gains{0.1, 0.01, 0.1};
  base.dt = 0.01;
  base.duration = 600.0;
  return base;
}

inline int cmd_simulate(const fs::path& config_path, const fs::path& out_path, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SimConfig config = config::load_sim_config(config_path);
  const Trajectory traj = run(config);
  const RunSummary summary = summarize(traj, config.path);

  {
    auto csv = detail::open_output(out_path);
    report::write_trajectory_csv(csv, traj);
  }
  fs::path json_path = out_path;
  json_path.replace_extension(".json");
  nlohmann::json doc = report::to_json(summary, traj);
  doc["manifest"] = {
      {"tool", "pushsim"},
      {"version", std::string(kVersion)},
      {"command", "simulate"},
      {"config", config::to_json(config)},
      {"config_path", config_path.string()},
      {"outputs", {out_path.string(), json_path.string()}},
      {"wall_time_s", detail::seconds_since(start)},
  };
  detail::write_json(json_path, doc);

  out << "simulate: " << to_string(summary.status.kind) << " after " << traj.records.size() << " records, final y_c "
      << report::format_number(summary.final_y_c) << " m\n";
  return summary.status.kind == TerminalKind::ContactLost ? kContactLost : kOk;
}

struct SweepArgs {
  std::string slider;
  fs::path out_dir;
  std::optional<fs::path> config_path;
  std::optional<fs::path> grid_path;
  unsigned jobs = 0;
  bool trajectories = false;
};

inline int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  SimConfig base = sweep_base(args.slider);
  if (args.config_path) {
    auto tree = config::read_ini(*args.config_path);
    if (tree.get_child_optional("slider")) {
      throw ConfigError("slider", "sweep configs may not override the slider; it is chosen on the command line");
    }
    base = config::apply(tree, base);
  }
  const SweepGrid grid = args.grid_path ? config::load_grid(*args.grid_path) : default_grid();
  // fail fast on bad base settings; per-combo values are validated by each run
  SimConfig probe = base;
  probe.s0 = 0.0;
  probe.validate();

  fs::create_directories(args.out_dir);
  std::vector<std::string> outputs;
  SweepOptions options;
  options.jobs = args.jobs;
  if (args.trajectories) {
    fs::create_directories(args.out_dir / "trajectories");
    options.on_trajectory = [&](const SweepCombo& combo, const Trajectory& traj) {
      std::ostringstream name;
      name << "combo_" << std::setw(4) << std::setfill('0') << combo.index << ".csv";
      const fs::path path = args.out_dir / "trajectories" / name.str();
      auto csv = detail::open_output(path);
      report::write_trajectory_csv(csv, traj);
      outputs.push_back(path.string());
    };
  }
  const auto results = sweep(grid, base, options);

  const fs::path summary_path = args.out_dir / "summary.csv";
  {
    auto csv = detail::open_output(summary_path);
    report::write_summary_csv(csv, results);
  }
  outputs.insert(outputs.begin(), summary_path.string());

  std::size_t lost = 0;
  std::size_t corners = 0;
  nlohmann::json statuses = nlohmann::json::array();
  for (const auto& r : results) {
    if (r.summary.status.kind == TerminalKind::ContactLost) ++lost;
    if (r.summary.status.kind == TerminalKind::CornerReached) ++corners;
    statuses.push_back({{"index", r.combo.index}, {"status", to_string(r.summary.status.kind)}});
  }
  const fs::path manifest_path = args.out_dir / "manifest.json";
  outputs.push_back(manifest_path.string());
  detail::write_json(manifest_path, {
                                        {"tool", "pushsim"},
                                        {"version", std::string(kVersion)},
                                        {"command", "sweep"},
                                        {"slider", args.slider},
                                        {"config", config::to_json(base)},
                                        {"combinations", results.size()},
                                        {"contact_lost", lost},
                                        {"corner_reached", corners},
                                        {"outputs", outputs},
                                        {"statuses", statuses},
                                        {"wall_time_s", detail::seconds_since(start)},
                                    });

  out << "sweep " << args.slider << ": " << results.size() << " runs, " << lost << " contact lost, " << corners
      << " reached a corner\n";
  return lost == 0 && corners == 0 ? kOk : kSweepFailures;
}

inline int cmd_check(std::uint64_t seed, std::size_t count, std::ostream& out, const oracle::Solver& solver) {
  if (count < 1) throw ConfigError("count", "count must be >= 1");
  const auto report = oracle::run_check(seed, count, solver);
  out << "check: " << report.count << " instances, max deviation " << report::format_number(report.max_deviation)
      << " (tolerance " << report::format_number(oracle::kCheckTolerance) << ")\n";
  if (report.failures == 0) return kOk;
  out << report.failures << " instance(s) failed; first failure:\n" << report.first_failure_detail.dump(2) << '\n';
  return kCheckFailed;
}

/// Parses arguments and dispatches. `solver` is the dynamics routine exercised by `check`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               const oracle::Solver& solver = solve_motion) {
  CLI::App app{"Quasistatic planar pushing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  fs::path sim_config;
  fs::path sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop push and write its trajectory");
  simulate->add_option("--config", sim_config, "Config file")->required();
  simulate->add_option("--out", sim_out, "Trajectory CSV path (a .json summary is written next to it)")->required();

  SweepArgs sweep_args;
  std::string sweep_config;
  std::string sweep_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the initial-state / parameter grid for one slider");
  sweep_cmd->add_option("slider", sweep_args.slider, "square or circle")->required();
  sweep_cmd->add_option("--out", sweep_args.out_dir, "Output directory")->required();
  sweep_cmd->add_option("--config", sweep_config, "Config overriding gains, limit surface and timing");
  sweep_cmd->add_option("--grid", sweep_grid, "Grid file replacing the default grid");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "Parallel runs (0: all cores)");
  sweep_cmd->add_flag("--trajectories", sweep_args.trajectories, "Write one trajectory CSV per combination");

  std::uint64_t seed = 1;
  std::size_t count = 1000;
  auto* check = app.add_subcommand("check", "Compare the dynamics solver with the brute-force reference");
  check->add_option("--seed", seed, "Random seed");
  check->add_option("--count", count, "Number of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out, out);
    if (sweep_cmd->parsed()) {
      if (!sweep_config.empty()) sweep_args.config_path = sweep_config;
      if (!sweep_grid.empty()) sweep_args.grid_path = sweep_grid;
      return cmd_sweep(sweep_args, out);
    }
    if (check->parsed()) return cmd_check(seed, count, out, solver);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace pushsim::cli
