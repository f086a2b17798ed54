#include "nltraffic/entropy_audit.hpp"

#include <cmath>
#include <sstream>

#include "nltraffic/errors.hpp"
#include "nltraffic/kernel.hpp"

namespace nltraffic {

double l1_distance(const DensityField& a, const DensityField& b, Window window) {
  require_same_grid(a, b, "l1_distance");
  if (!(window.lo < window.hi) || window.lo < a.x0 - 1e-12 || window.hi > a.x_end() + 1e-12)
    throw UsageError("l1_distance: window outside the domain");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double c = a.center(i);
    if (c >= window.lo && c <= window.hi) sum += std::abs(a.values[i] - b.values[i]);
  }
  return sum * a.dx;
}

double Bump::value(double s) noexcept {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return u * u * u;
}

double Bump::derivative(double s) noexcept {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return -6.0 * s * u * u;
}

double TestFunction::value(double t, double x) const noexcept {
  return Bump::value((t - t0) / sigma_t) * Bump::value((x - x0) / sigma_x);
}

double TestFunction::dt(double t, double x) const noexcept {
  return Bump::derivative((t - t0) / sigma_t) / sigma_t * Bump::value((x - x0) / sigma_x);
}

double TestFunction::dx(double t, double x) const noexcept {
  return Bump::value((t - t0) / sigma_t) * Bump::derivative((x - x0) / sigma_x) / sigma_x;
}

std::vector<TestFunction> bump_family(double t0, const std::vector<double>& x_centers, double t_span,
                                      double x_half_span) {
  static constexpr double radii[] = {0.1, 0.25, 0.4};
  std::vector<TestFunction> out;
  for (std::size_t c = 0; c < x_centers.size(); ++c)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        std::ostringstream id;
        id << "c" << c << "_t" << i << "_x" << j;
        out.push_back({t0, x_centers[c], radii[i] * t_span, radii[j] * x_half_span, id.str()});
      }
  return out;
}

double entropy_residual(const Trajectory& traj, const VelocityModel& model, const TestFunction& phi) {
  if (traj.snapshots.empty()) throw UsageError("entropy_residual: empty trajectory");
  if (!(phi.sigma_t > 0.0 && phi.sigma_x > 0.0)) throw UsageError("entropy_residual: radii must be positive");
  const auto& grid = traj.snapshots.front().field;
  const double t_lo = phi.t0 - phi.sigma_t;
  const double t_hi = phi.t0 + phi.sigma_t;
  const double x_lo = phi.x0 - phi.sigma_x;
  const double x_hi = phi.x0 + phi.sigma_x;
  if (t_lo <= 0.0)
    throw UsageError("entropy_residual: test function reaches t = 0 (initial-data term needed)");
  if (t_hi > traj.snapshots.back().t || x_lo < grid.x0 || x_hi > grid.x_end())
    throw UsageError("entropy_residual: test function support escapes the trajectory window");

  std::size_t inside = 0;
  for (const auto& s : traj.snapshots)
    if (s.t > t_lo && s.t < t_hi) ++inside;
  if (inside < kMinSnapshotsInSupport) {
    std::ostringstream os;
    os << "entropy_residual: only " << inside << " snapshots inside the support of " << phi.id
       << " (need " << kMinSnapshotsInSupport << ")";
    throw UsageError(os.str());
  }

  const std::size_t i_lo = static_cast<std::size_t>(std::max(0.0, std::floor((x_lo - grid.x0) / grid.dx)));
  const std::size_t i_hi = std::min(grid.size(), static_cast<std::size_t>(std::ceil((x_hi - grid.x0) / grid.dx)) + 1);

  auto slice = [&](const Snapshot& s) {
    if (s.t <= t_lo || s.t >= t_hi) return 0.0;
    const double bt = Bump::value((s.t - phi.t0) / phi.sigma_t);
    const double dbt = Bump::derivative((s.t - phi.t0) / phi.sigma_t) / phi.sigma_t;
    double acc = 0.0;
    for (std::size_t i = i_lo; i < i_hi; ++i) {
      const double x = s.field.center(i);
      const double sx = (x - phi.x0) / phi.sigma_x;
      if (std::abs(sx) >= 1.0) continue;
      const double rho = s.field.values[i];
      const double eta = 0.5 * rho * rho;
      const double psi = model.psi(rho);
      acc += eta * dbt * Bump::value(sx) + psi * bt * Bump::derivative(sx) / phi.sigma_x;
    }
    return acc * s.field.dx;
  };

  double total = 0.0;
  double prev = slice(traj.snapshots.front());
  for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
    const double cur = slice(traj.snapshots[n]);
    total += 0.5 * (prev + cur) * (traj.snapshots[n].t - traj.snapshots[n - 1].t);
    prev = cur;
  }
  return total;
}

double JDecomposition::sum_abs() const noexcept {
  return std::abs(J) + std::abs(J1) + std::abs(J21) + std::abs(J22) + std::abs(J23) + std::abs(J3) +
         std::abs(J4) + std::abs(J5);
}

JDecomposition j_decomposition(const NonlocalState& state, const VelocityModel& model,
                               const SpatialTestFunction& phi) {
  const auto& f = state.field;
  const std::size_t n = f.size();
  if (state.q.cells() != n) throw UsageError("j_decomposition: q does not match the field");
  if (!(phi.sigma > 0.0)) throw UsageError("j_decomposition: radius must be positive");
  // Keep a full stencil between the support and the domain ends.
  if (phi.x0 - phi.sigma < f.x0 + 2.0 * f.dx || phi.x0 + phi.sigma > f.x_end() - 2.0 * f.dx)
    throw UsageError("j_decomposition: test function support touches the domain boundary");

  const std::vector<double> qc = q_at_centers(f, state.q);
  const auto& rho = f.values;
  const auto& qe = state.q.edges;
  const double eps = state.eps;
  const double dx = f.dx;

  JDecomposition d;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = f.center(i);
    const double phi_v = phi.value(x);
    const double phi_x = phi.dx(x);
    if (phi_v == 0.0 && phi_x == 0.0) continue;

    const double r = rho[i];
    const double q = qc[i];
    const double r_x = (rho[i + 1] - rho[i - 1]) / (2.0 * dx);
    const double q_x = (qe[i + 1] - qe[i]) / dx;
    const double dv_r = model.velocity_derivative(r);
    const double dv_q = model.velocity_derivative(q);
    const double gap = model.velocity(r) - model.velocity(q);

    d.J += (2.0 * r * r_x * gap + 2.0 * r * r * (dv_r * r_x - dv_q * q_x)) * phi_v;
    d.J1 -= r * r * gap * phi_x;
    d.J21 += r * r * dv_r * r_x * phi_v;
    d.J22 -= r * q * dv_q * q_x * phi_v;
    d.J23 += r * eps * q_x * q_x * dv_q * phi_v;
    d.J4 -= q * q * dv_q * q_x * phi_v;
    d.J5 += q * eps * q_x * q_x * dv_q * phi_v;
    d.w_check -= (model.w(r) - model.w(q)) * phi_x;
  }
  d.J *= dx;
  d.J1 *= dx;
  d.J21 *= dx;
  d.J22 *= dx;
  d.J23 *= dx;
  d.J4 *= dx;
  d.J5 *= dx;
  d.w_check *= dx;
  d.J3 = d.J21;
  return d;
}

}  // namespace nltraffic
