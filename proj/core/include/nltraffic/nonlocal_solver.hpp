#pragma once

#include <optional>
#include <vector>

#include "nltraffic/field.hpp"
#include "nltraffic/kernel.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/trajectory.hpp"

namespace nltraffic {

enum class TimeIntegrator { forward_euler, ssp_rk2 };

/// Density, kernel scale and the cached look-ahead average at time t.
struct NonlocalState {
  double t = 0.0;
  DensityField field;
  double eps = 1.0;
  QField q;
};

NonlocalState make_nonlocal_state(DensityField field, double eps, double t = 0.0);

struct NonlocalOptions {
  double cfl = 0.5;
  TimeIntegrator integrator = TimeIntegrator::forward_euler;
  int max_halvings = 20;
  double slack = kDensitySlack;
  /// Step used when every interface speed vanishes; defaults to cfl dx / v(0).
  std::optional<double> dt_max;
};

/// Boundary mass exchanged during one step.
struct StepLedger {
  double inflow = 0.0;
  double outflow = 0.0;
  double clamped = 0.0;
};

/// cfl dx / max_k v(q_k) over all interfaces, or dt_max when the road is jammed.
double cfl_dt(const NonlocalState& state, const VelocityModel& model, double cfl,
              std::optional<double> dt_max = std::nullopt);

/// Upwind update rho_i -= dt/dx (F_{i+1/2} - F_{i-1/2}), F_{i+1/2} = rho_i v(q_{i+1}).
/// Throws CflViolation if a value leaves [-slack, rho_jam + slack].
NonlocalState step_nonlocal(const NonlocalState& state, const VelocityModel& model, double dt,
                            const NonlocalOptions& options = {}, StepLedger* ledger = nullptr);

/// March from t = 0 to t_end, landing exactly on every snapshot time. The
/// returned trajectory starts with the initial data.
Trajectory solve_nonlocal(const DensityField& initial, const VelocityModel& model, double eps,
                          double t_end, const NonlocalOptions& options,
                          const std::vector<double>& snapshot_times);

}  // namespace nltraffic
