#include "nltraffic/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "nltraffic/errors.hpp"

namespace nltraffic {

QField exp_average(const DensityField& field, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("kernel scale eps must be positive");
  require_valid(field);

  const std::size_t n = field.size();
  const auto& rho = field.values;
  const double h = field.dx / eps;
  const double alpha = std::exp(-h);
  // 1 - alpha without cancellation when eps >> dx.
  const double one_minus_alpha = -std::expm1(-h);

  QField q{field.x0, field.dx, eps, field.boundary, std::vector<double>(n + 1)};
  if (field.boundary == Boundary::periodic) {
    double s = rho[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) s = rho[k] + alpha * s;
    const double one_minus_alpha_n = -std::expm1(-static_cast<double>(n) * h);
    q.edges[n] = std::clamp(one_minus_alpha * s / one_minus_alpha_n,
                            *std::min_element(rho.begin(), rho.end()),
                            *std::max_element(rho.begin(), rho.end()));
  } else {
    q.edges[n] = rho[n - 1];
  }

  for (std::size_t i = n; i-- > 0;) {
    const double next = q.edges[i + 1];
    const double v = one_minus_alpha * rho[i] + alpha * next;
    // A convex combination; pin roundoff back inside the hull.
    q.edges[i] = std::clamp(v, std::min(rho[i], next), std::max(rho[i], next));
  }
  return q;
}

std::vector<double> q_at_centers(const DensityField& field, const QField& q) {
  if (q.cells() != field.size()) throw UsageError("q_at_centers: grid mismatch");
  const double h = 0.5 * field.dx / q.eps;
  const double beta = std::exp(-h);
  const double one_minus_beta = -std::expm1(-h);
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double next = q.edges[i + 1];
    const double v = one_minus_beta * field.values[i] + beta * next;
    out[i] = std::clamp(v, std::min(field.values[i], next), std::max(field.values[i], next));
  }
  return out;
}

OdeResidual check_ode_identity(const DensityField& field, const QField& q) {
  if (q.cells() != field.size() || q.boundary != field.boundary ||
      std::abs(q.dx - field.dx) > 1e-12 * field.dx ||
      std::abs(q.x0 - field.x0) > 1e-12 * (1.0 + std::abs(field.x0)))
    throw UsageError("check_ode_identity: q does not belong to this field's grid");

  OdeResidual r;
  r.residual.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double dq = (q.edges[i + 1] - q.edges[i]) / field.dx;
    const double res = field.values[i] - (q.edges[i] - q.eps * dq);
    r.residual[i] = res;
    r.l1 += std::abs(res) * field.dx;
    if (std::abs(res) > r.max_abs) {
      r.max_abs = std::abs(res);
      r.argmax = i;
    }
  }
  return r;
}

}  // namespace nltraffic
