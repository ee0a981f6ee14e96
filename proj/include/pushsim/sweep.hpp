#pragma once

// Robustness sweep over initial states and slider parameters.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "pushsim/geometry.hpp"
#include "pushsim/sim.hpp"

namespace pushsim {

/// A tau_max grid entry, either absolute or a multiple of the shape's uniform/peak torsional capacity.
struct TauSpec {
  enum class Basis { Absolute, Uniform, Peak };
  Basis basis = Basis::Uniform;
  double factor = 1.0;

  static TauSpec absolute(double tau) { return {Basis::Absolute, tau}; }
  static TauSpec uniform(double factor = 1.0) { return {Basis::Uniform, factor}; }
  static TauSpec peak(double factor = 1.0) { return {Basis::Peak, factor}; }

  double resolve(const SliderShape& shape, double f_max) const {
    switch (basis) {
      case Basis::Absolute:
        return factor;
      case Basis::Uniform:
        return factor * f_max * mean_support_distance(shape);
      case Basis::Peak:
        return factor * f_max * max_support_distance(shape);
    }
    return factor;
  }
};

struct SweepGrid {
  std::vector<double> y0;
  std::vector<double> s0;
  std::vector<double> phi0;
  std::vector<double> mu_c;
  std::vector<TauSpec> tau_max;

  std::size_t size() const { return y0.size() * s0.size() * phi0.size() * mu_c.size() * tau_max.size(); }
};

/// The 3^5 grid: offsets of -40/0/40 cm, headings of -pi/8/0/pi/8, three contact
/// frictions, and 0.1x uniform / uniform / peak torsional capacity.
inline SweepGrid default_grid() {
  const double eighth = std::numbers::pi / 8.0;
  return {
      {-0.4, 0.0, 0.4},
      {-0.4, 0.0, 0.4},
      {-eighth, 0.0, eighth},
      {0.0, 0.5, 1.0},
      {TauSpec::uniform(0.1), TauSpec::uniform(1.0), TauSpec::peak(1.0)},
  };
}

struct SweepCombo {
  std::size_t index = 0;
  double y0 = 0.0;
  double s0 = 0.0;
  double phi0 = 0.0;
  double mu_c = 0.0;
  double tau_max = 0.0;

  SimConfig apply(SimConfig base) const {
    base.y0 = y0;
    base.s0 = s0;
    base.phi0 = phi0;
    base.mu_c = mu_c;
    base.tau_max = tau_max;
    return base;
  }
};

/// All combinations, lexicographic with y0 outermost and tau_max innermost.
inline std::vector<SweepCombo> enumerate_combos(const SweepGrid& grid, const SimConfig& base) {
  std::vector<SweepCombo> out;
  out.reserve(grid.size());
  std::vector<double> taus;
  for (const auto& spec : grid.tau_max) taus.push_back(spec.resolve(base.shape, base.f_max));
  for (double y0 : grid.y0)
    for (double s0 : grid.s0)
      for (double phi0 : grid.phi0)
        for (double mu : grid.mu_c)
          for (double tau : taus) out.push_back({out.size(), y0, s0, phi0, mu, tau});
  return out;
}

struct SweepResult {
  SweepCombo combo;
  RunSummary summary;
};

struct SweepOptions {
  unsigned jobs = 0;  // 0: hardware concurrency
  double tail_window = 60.0;
  /// Called on the calling thread, in combo order, with each full trajectory.
  std::function<void(const SweepCombo&, const Trajectory&)> on_trajectory;
};

/// Runs every combination. Runs execute in batches of `jobs` worker threads;
/// results come back in combo order regardless of scheduling.
inline std::vector<SweepResult> sweep(const SweepGrid& grid, const SimConfig& base, const SweepOptions& options = {}) {
  const auto combos = enumerate_combos(grid, base);
  std::vector<SweepResult> results(combos.size());
  if (combos.empty()) return results;

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, combos.size()));
  const bool keep = static_cast<bool>(options.on_trajectory);
  // without a trajectory consumer, one batch covers everything
  const std::size_t batch = keep ? jobs : combos.size();

  for (std::size_t begin = 0; begin < combos.size(); begin += batch) {
    const std::size_t end = std::min(combos.size(), begin + batch);
    std::vector<Trajectory> held(keep ? end - begin : 0);
    std::vector<std::exception_ptr> errors(end - begin);
    std::size_t next = begin;
    std::mutex next_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(next_mutex);
          if (next == end) return;
          i = next++;
        }
        try {
          const SimConfig config = combos[i].apply(base);
          Trajectory traj = run(config);
          results[i] = {combos[i], summarize(traj, config.path, options.tail_window)};
          if (keep) held[i - begin] = std::move(traj);
        } catch (...) {
          errors[i - begin] = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    if (keep) {
      for (std::size_t i = begin; i < end; ++i) options.on_trajectory(combos[i], held[i - begin]);
    }
  }
  return results;
}

}  // namespace pushsim
