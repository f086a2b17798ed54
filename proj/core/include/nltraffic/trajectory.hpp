#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nltraffic/field.hpp"

namespace nltraffic {

struct Snapshot {
  double t = 0.0;
  DensityField field;
};

/// Run bookkeeping shared by the nonlocal and local solvers.
struct RunMeta {
  std::string solver;  // "nonlocal" or "godunov"
  std::string model;
  double eps = std::numeric_limits<double>::quiet_NaN();  // NaN for the local law
  double dx = 0.0;
  double cfl = 0.0;
  Boundary boundary = Boundary::constant_extension;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;

  // Conservation ledger: mass(t_end) - mass(0) should equal inflow - outflow.
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double inflow = 0.0;
  double outflow = 0.0;
  double clamped_mass = 0.0;  // mass removed by clamping within the slack

  // Extremes over every accepted step.
  double rho_min = std::numeric_limits<double>::infinity();
  double rho_max = -std::numeric_limits<double>::infinity();
  double tv_initial = 0.0;
  double tv_max = 0.0;

  double mass_defect() const noexcept {
    return mass_final - mass_initial - (inflow - outflow) + clamped_mass;
  }
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  RunMeta meta;

  const Snapshot& final() const { return snapshots.back(); }
  /// Snapshot whose time equals t to within 1e-12 (relative); UsageError otherwise.
  const Snapshot& at(double t) const;
};

/// Sorted, deduplicated snapshot schedule in (0, t_end], always ending at t_end.
std::vector<double> normalize_snapshot_times(const std::vector<double>& requested, double t_end);

/// n evenly spaced times t_end/n, 2 t_end/n, ..., t_end.
std::vector<double> uniform_snapshot_times(double t_end, std::size_t n);

}  // namespace nltraffic
