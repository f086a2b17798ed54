#include "nltraffic/nonlocal_solver.hpp"

#include <algorithm>
#include <cmath>

#include "march.hpp"
#include "nltraffic/errors.hpp"

namespace nltraffic {

namespace {

struct FluxBalance {
  std::vector<double> rate;  // d rho_i / dt
  double left = 0.0;         // F_{-1/2}
  double right = 0.0;        // F_{N-1/2}
};

FluxBalance flux_balance(const DensityField& field, const QField& q, const VelocityModel& model) {
  const std::size_t n = field.size();
  const auto& rho = field.values;
  std::vector<double> flux(n + 1);
  for (std::size_t k = 1; k <= n; ++k) flux[k] = rho[k - 1] * model.velocity(q.edges[k]);
  // The ghost cell left of the grid: a copy of cell 0, or the last cell when periodic.
  flux[0] = field.boundary == Boundary::periodic ? flux[n] : rho[0] * model.velocity(q.edges[0]);

  FluxBalance b;
  b.rate.resize(n);
  const double inv_dx = 1.0 / field.dx;
  for (std::size_t i = 0; i < n; ++i) b.rate[i] = -(flux[i + 1] - flux[i]) * inv_dx;
  b.left = flux[0];
  b.right = flux[n];
  return b;
}

void validate_inputs(const DensityField& initial, const VelocityModel& model, double eps, double t_end,
                     const NonlocalOptions& options) {
  const auto check = validate_model(model);
  if (!check.pass) throw InvalidModelError("velocity model fails (A1): " + check.message);
  require_valid(initial);
  require_in_range(initial, model.rho_jam(), options.slack);
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
}

}  // namespace

NonlocalState make_nonlocal_state(DensityField field, double eps, double t) {
  QField q = exp_average(field, eps);
  return NonlocalState{t, std::move(field), eps, std::move(q)};
}

double cfl_dt(const NonlocalState& state, const VelocityModel& model, double cfl,
              std::optional<double> dt_max) {
  double speed = 0.0;
  for (double qk : state.q.edges) speed = std::max(speed, model.velocity(qk));
  if (speed <= 0.0) return dt_max.value_or(cfl * state.field.dx / model.max_velocity());
  return cfl * state.field.dx / speed;
}

NonlocalState step_nonlocal(const NonlocalState& state, const VelocityModel& model, double dt,
                            const NonlocalOptions& options, StepLedger* ledger) {
  const double dx = state.field.dx;
  const double rho_jam = model.rho_jam();
  StepLedger local;

  const FluxBalance b0 = flux_balance(state.field, state.q, model);
  DensityField next = state.field;
  for (std::size_t i = 0; i < next.size(); ++i) next.values[i] += dt * b0.rate[i];

  if (options.integrator == TimeIntegrator::forward_euler) {
    local.clamped = detail::guard_bounds(next.values, rho_jam, options.slack, dx);
    local.inflow = dt * b0.left;
    local.outflow = dt * b0.right;
  } else {
    double stage_clamp = detail::guard_bounds(next.values, rho_jam, options.slack, dx);
    const QField q1 = exp_average(next, state.eps);
    const FluxBalance b1 = flux_balance(next, q1, model);
    for (std::size_t i = 0; i < next.size(); ++i)
      next.values[i] = 0.5 * state.field.values[i] + 0.5 * (next.values[i] + dt * b1.rate[i]);
    local.clamped = 0.5 * stage_clamp + detail::guard_bounds(next.values, rho_jam, options.slack, dx);
    local.inflow = 0.5 * dt * (b0.left + b1.left);
    local.outflow = 0.5 * dt * (b0.right + b1.right);
  }

  if (ledger) *ledger = local;
  QField q = exp_average(next, state.eps);
  return NonlocalState{state.t + dt, std::move(next), state.eps, std::move(q)};
}

Trajectory solve_nonlocal(const DensityField& initial, const VelocityModel& model, double eps,
                          double t_end, const NonlocalOptions& options,
                          const std::vector<double>& snapshot_times) {
  validate_inputs(initial, model, eps, t_end, options);

  RunMeta meta;
  meta.solver = "nonlocal";
  meta.model = model.describe();
  meta.eps = eps;
  meta.dx = initial.dx;
  meta.cfl = options.cfl;
  meta.boundary = initial.boundary;

  // The stepper sees raw value vectors; rebuild the field shell around them.
  DensityField shell = initial;
  auto as_state = [&](const std::vector<double>& values) {
    shell.values = values;
    return make_nonlocal_state(shell, eps);
  };
  auto step_size = [&](const std::vector<double>& values) {
    return cfl_dt(as_state(values), model, options.cfl, options.dt_max);
  };
  auto stepper = [&](const std::vector<double>& values, double dt) {
    StepLedger ledger;
    NonlocalState next = step_nonlocal(as_state(values), model, dt, options, &ledger);
    return detail::StepOutcome{std::move(next.field.values), ledger.inflow, ledger.outflow,
                               ledger.clamped};
  };
  return detail::march(initial, std::move(meta), normalize_snapshot_times(snapshot_times, t_end),
                       step_size, stepper, options.max_halvings);
}

}  // namespace nltraffic
