#pragma once

#include <cstddef>
#include <vector>

#include "nltraffic/field.hpp"

namespace nltraffic {

/// Look-ahead average q(x) = int_x^inf eps^-1 exp((x - y)/eps) rho(y) dy of a
/// piecewise-constant density, sampled at the N + 1 cell edges.
/// edges[i] is q at the left edge of cell i; edges[N] is q at the right end
/// of the grid (the seed of the recursion).
struct QField {
  double x0 = 0.0;
  double dx = 1.0;
  double eps = 1.0;
  Boundary boundary = Boundary::constant_extension;
  std::vector<double> edges;

  std::size_t cells() const noexcept { return edges.empty() ? 0 : edges.size() - 1; }
  double at_left_edge(std::size_t i) const noexcept { return edges[i]; }
};

/// Exact right-to-left recursion q_i = (1 - a) rho_i + a q_{i+1}, a = exp(-dx/eps).
/// Constant extension continues the last cell to +inf; periodic data is
/// seeded with the closed geometric-series sum.
QField exp_average(const DensityField& field, double eps);

/// q at cell centers, exact for the piecewise-constant density:
/// q(c_i) = (1 - sqrt(a)) rho_i + sqrt(a) q_{i+1}.
std::vector<double> q_at_centers(const DensityField& field, const QField& q);

struct OdeResidual {
  double max_abs = 0.0;
  double l1 = 0.0;
  std::size_t argmax = 0;
  std::vector<double> residual;  // rho_i - (q_i - eps D+q_i), per cell
};

/// Residual of rho = q - eps q_x with the forward difference D+q_i = (q_{i+1} - q_i)/dx.
OdeResidual check_ode_identity(const DensityField& field, const QField& q);

}  // namespace nltraffic
