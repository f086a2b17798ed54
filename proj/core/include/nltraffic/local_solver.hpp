#pragma once

#include <vector>

#include "nltraffic/field.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/trajectory.hpp"

namespace nltraffic {

/// Exact-Riemann interface flux for f(rho) = rho v(rho):
/// min of f on [l, r] if l <= r, max of f on [r, l] otherwise.
///
/// Interior extrema of f are the sign changes of f' on [0, rho_jam], located
/// once per model (1024-sample scan, bisection to 1e-12) and reused for
/// every interface.
class GodunovFlux {
 public:
  explicit GodunovFlux(VelocityModel model);

  double operator()(double rho_l, double rho_r) const noexcept;
  const std::vector<double>& critical_points() const noexcept { return critical_; }
  const VelocityModel& model() const noexcept { return model_; }

 private:
  VelocityModel model_;
  std::vector<double> critical_;
};

double godunov_flux(const VelocityModel& model, double rho_l, double rho_r);

struct LocalOptions {
  double cfl = 0.5;
  int max_halvings = 20;
  double slack = kDensitySlack;
};

struct LocalStep {
  DensityField field;
  std::vector<double> interface_flux;  // N + 1 values, F_{-1/2} .. F_{N-1/2}
};

/// One conservative Godunov update with ghost-cell boundaries.
LocalStep godunov_step(const DensityField& field, const GodunovFlux& flux, double dt,
                       double slack = kDensitySlack);

/// Entropy-admissible reference solution of rho_t + (rho v(rho))_x = 0 with
/// dt = cfl dx / max|f'|.
Trajectory solve_local(const DensityField& initial, const VelocityModel& model, double t_end,
                       const LocalOptions& options, const std::vector<double>& snapshot_times);

}  // namespace nltraffic
