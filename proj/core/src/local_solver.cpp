#include "nltraffic/local_solver.hpp"

#include <algorithm>
#include <cmath>

#include "march.hpp"
#include "nltraffic/errors.hpp"

namespace nltraffic {

namespace {

constexpr int kCriticalScanSamples = 1024;
constexpr double kCriticalTolerance = 1e-12;

}  // namespace

GodunovFlux::GodunovFlux(VelocityModel model) : model_(std::move(model)) {
  const double rho_jam = model_.rho_jam();
  auto df = [&](double x) { return model_.flux_derivative(x); };
  double prev_x = 0.0;
  double prev = df(prev_x);
  for (int k = 1; k <= kCriticalScanSamples; ++k) {
    const double x = rho_jam * k / kCriticalScanSamples;
    const double cur = df(x);
    if (prev == 0.0 && k > 1) {
      critical_.push_back(prev_x);
    } else if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
      double a = prev_x;
      double b = x;
      double fa = prev;
      while (b - a > kCriticalTolerance) {
        const double m = 0.5 * (a + b);
        const double fm = df(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      critical_.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev = cur;
  }
}

double GodunovFlux::operator()(double rho_l, double rho_r) const noexcept {
  if (rho_l <= rho_r) {
    double best = std::min(model_.flux(rho_l), model_.flux(rho_r));
    for (double c : critical_)
      if (c > rho_l && c < rho_r) best = std::min(best, model_.flux(c));
    return best;
  }
  double best = std::max(model_.flux(rho_l), model_.flux(rho_r));
  for (double c : critical_)
    if (c > rho_r && c < rho_l) best = std::max(best, model_.flux(c));
  return best;
}

double godunov_flux(const VelocityModel& model, double rho_l, double rho_r) {
  rho_l = model.checked_density(rho_l);
  rho_r = model.checked_density(rho_r);
  return GodunovFlux(model)(rho_l, rho_r);
}

LocalStep godunov_step(const DensityField& field, const GodunovFlux& flux, double dt, double slack) {
  const std::size_t n = field.size();
  const auto& rho = field.values;
  LocalStep out{field, std::vector<double>(n + 1)};
  auto& F = out.interface_flux;
  for (std::size_t k = 1; k < n; ++k) F[k] = flux(rho[k - 1], rho[k]);
  if (field.boundary == Boundary::periodic) {
    F[0] = F[n] = flux(rho[n - 1], rho[0]);
  } else {
    F[0] = flux.model().flux(rho[0]);
    F[n] = flux.model().flux(rho[n - 1]);
  }
  const double lambda = dt / field.dx;
  for (std::size_t i = 0; i < n; ++i) out.field.values[i] -= lambda * (F[i + 1] - F[i]);
  detail::guard_bounds(out.field.values, flux.model().rho_jam(), slack, field.dx);
  return out;
}

Trajectory solve_local(const DensityField& initial, const VelocityModel& model, double t_end,
                       const LocalOptions& options, const std::vector<double>& snapshot_times) {
  const auto check = validate_model(model);
  if (!check.pass) throw InvalidModelError("velocity model fails (A1): " + check.message);
  require_valid(initial);
  require_in_range(initial, model.rho_jam(), options.slack);
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");

  const GodunovFlux flux(model);
  const double speed = model.max_characteristic_speed();
  const double dt0 = options.cfl * initial.dx / (speed > 0.0 ? speed : model.max_velocity());

  RunMeta meta;
  meta.solver = "godunov";
  meta.model = model.describe();
  meta.dx = initial.dx;
  meta.cfl = options.cfl;
  meta.boundary = initial.boundary;

  DensityField shell = initial;
  auto step_size = [dt0](const std::vector<double>&) { return dt0; };
  auto stepper = [&](const std::vector<double>& values, double dt) {
    shell.values = values;
    LocalStep s = godunov_step(shell, flux, dt, options.slack);
    const std::size_t n = values.size();
    double clamped = 0.0;
    // godunov_step already clamped; recover the clamped mass from the flux balance.
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = values[i] - dt / shell.dx * (s.interface_flux[i + 1] - s.interface_flux[i]);
      clamped += (raw - s.field.values[i]) * shell.dx;
    }
    return detail::StepOutcome{std::move(s.field.values), dt * s.interface_flux[0],
                               dt * s.interface_flux[n], clamped};
  };
  return detail::march(initial, std::move(meta), normalize_snapshot_times(snapshot_times, t_end),
                       step_size, stepper, options.max_halvings);
}

}  // namespace nltraffic
