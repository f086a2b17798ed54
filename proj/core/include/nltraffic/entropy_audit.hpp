#pragma once

#include <string>
#include <vector>

#include "nltraffic/field.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/nonlocal_solver.hpp"
#include "nltraffic/trajectory.hpp"

namespace nltraffic {

struct Window {
  double lo;
  double hi;
};

/// dx * sum |a_i - b_i| over the cells whose centers lie in the window.
double l1_distance(const DensityField& a, const DensityField& b, Window window);

/// B(s) = (1 - s^2)^3 on |s| < 1: nonnegative, C^2, compactly supported.
struct Bump {
  static double value(double s) noexcept;
  static double derivative(double s) noexcept;
};

/// Spatial slice x -> B((x - x0)/sigma).
struct SpatialTestFunction {
  double x0;
  double sigma;

  double value(double x) const noexcept { return Bump::value((x - x0) / sigma); }
  double dx(double x) const noexcept { return Bump::derivative((x - x0) / sigma) / sigma; }
};

/// phi(t, x) = B((t - t0)/sigma_t) B((x - x0)/sigma_x); max phi = 1.
struct TestFunction {
  double t0;
  double x0;
  double sigma_t;
  double sigma_x;
  std::string id;

  double value(double t, double x) const noexcept;
  double dt(double t, double x) const noexcept;
  double dx(double t, double x) const noexcept;
  double max_value() const noexcept { return 1.0; }
};

/// The 3 x 3 x 3 family: every center (t0 shared) paired with every
/// (sigma_t, sigma_x) = (r t_span, r x_half_span), r in {0.1, 0.25, 0.4}.
std::vector<TestFunction> bump_family(double t0, const std::vector<double>& x_centers, double t_span,
                                      double x_half_span);

inline constexpr std::size_t kMinSnapshotsInSupport = 8;

/// R(phi) = int int [eta(rho) phi_t + psi(rho) phi_x] dx dt: midpoint rule in
/// x, trapezoid rule over the snapshot times.
double entropy_residual(const Trajectory& traj, const VelocityModel& model, const TestFunction& phi);

struct JDecomposition {
  double J = 0.0;
  double J1 = 0.0;
  double J21 = 0.0;
  double J22 = 0.0;
  double J23 = 0.0;
  double J3 = 0.0;
  double J4 = 0.0;
  double J5 = 0.0;
  /// -int [W(rho) - W(q)] phi_x dx, the integrated-by-parts form of J3 + J4.
  double w_check = 0.0;

  double sum_abs() const noexcept;
  /// J - (J1 + J21 + J22 + J23)
  double split_residual() const noexcept { return J - (J1 + J21 + J22 + J23); }
  /// (J21 + J22) - (J3 + J4 + J5)
  double resplit_residual() const noexcept { return (J21 + J22) - (J3 + J4 + J5); }
  /// (J3 + J4) - w_check
  double parts_residual() const noexcept { return (J3 + J4) - w_check; }
};

/// Every term of the entropy-production decomposition of the nonlocal flux at
/// one time slice. rho at cell centers, q at cell centers (exact), centered
/// differences for rho_x and q_x, midpoint quadrature.
JDecomposition j_decomposition(const NonlocalState& state, const VelocityModel& model,
                               const SpatialTestFunction& phi);

}  // namespace nltraffic
