#pragma once

// Time marching shared by the nonlocal and local solvers: lands exactly on
// every snapshot time, halves rejected steps, and keeps the conservation
// ledger.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "nltraffic/errors.hpp"
#include "nltraffic/trajectory.hpp"

namespace nltraffic::detail {

struct StepOutcome {
  std::vector<double> values;
  double inflow = 0.0;   // mass entering through the left boundary during the step
  double outflow = 0.0;  // mass leaving through the right boundary
  double clamped = 0.0;  // mass removed by clamping into [0, rho_jam]
};

using Stepper = std::function<StepOutcome(const std::vector<double>&, double dt)>;
using StepSize = std::function<double(const std::vector<double>&)>;

inline void track_extremes(RunMeta& meta, const DensityField& f) {
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  meta.rho_min = std::min(meta.rho_min, *lo);
  meta.rho_max = std::max(meta.rho_max, *hi);
  meta.tv_max = std::max(meta.tv_max, total_variation(f));
}

inline Trajectory march(const DensityField& initial, RunMeta meta, const std::vector<double>& targets,
                        const StepSize& step_size, const Stepper& stepper, int max_halvings) {
  Trajectory traj;
  DensityField current = initial;
  meta.mass_initial = current.mass();
  meta.tv_initial = total_variation(current);
  track_extremes(meta, current);
  traj.snapshots.push_back({0.0, current});

  double t = 0.0;
  for (double target : targets) {
    while (t < target) {
      double dt = step_size(current.values);
      bool landing = false;
      if (t + dt >= target * (1.0 - 1e-14)) {
        dt = target - t;
        landing = true;
      }
      StepOutcome out;
      int halvings = 0;
      for (;;) {
        try {
          out = stepper(current.values, dt);
          break;
        } catch (const CflViolation& e) {
          if (++halvings > max_halvings) {
            std::ostringstream os;
            os << "step rejected after " << max_halvings << " halvings at t=" << t << ": "
               << e.what();
            throw NumericalError(os.str());
          }
          ++meta.rejected_steps;
          dt *= 0.5;
          landing = false;
        }
      }
      current.values = std::move(out.values);
      meta.inflow += out.inflow;
      meta.outflow += out.outflow;
      meta.clamped_mass += out.clamped;
      ++meta.steps;
      t = landing ? target : t + dt;
      track_extremes(meta, current);
    }
    traj.snapshots.push_back({target, current});
  }
  meta.mass_final = current.mass();
  traj.meta = std::move(meta);
  return traj;
}

/// Apply the bound guard to a raw update: CflViolation beyond the slack,
/// clamping (with mass bookkeeping) inside it.
inline double guard_bounds(std::vector<double>& values, double rho_jam, double slack, double dx) {
  double clamped = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= -slack && v <= rho_jam + slack)) {
      std::ostringstream os;
      os << "density " << v << " at cell " << i << " left [0, " << rho_jam << "]";
      throw CflViolation(os.str(), v, i);
    }
    const double c = std::clamp(v, 0.0, rho_jam);
    clamped += (v - c) * dx;
    values[i] = c;
  }
  return clamped;
}

}  // namespace nltraffic::detail
