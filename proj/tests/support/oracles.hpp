#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the production code paths it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "nltraffic/field.hpp"
#include "nltraffic/model.hpp"

namespace oracle {

// q at every cell edge by summing the kernel integral over each cell
// separately: O(N^2), long double, no recursion.
inline std::vector<double> direct_sum_q(const nltraffic::DensityField& f, double eps) {
  const std::size_t n = f.size();
  std::vector<double> q(n + 1);
  const long double e = eps;
  for (std::size_t i = 0; i <= n; ++i) {
    const long double x = static_cast<long double>(f.x0) + static_cast<long double>(i) * f.dx;
    long double acc = 0.0L;
    for (std::size_t j = i; j < n; ++j) {
      const long double a = static_cast<long double>(f.x0) + static_cast<long double>(j) * f.dx;
      const long double b = a + f.dx;
      acc += f.values[j] * (std::exp((x - a) / e) - std::exp((x - b) / e));
    }
    if (f.boundary == nltraffic::Boundary::constant_extension) {
      const long double end = static_cast<long double>(f.x0) + static_cast<long double>(n) * f.dx;
      acc += f.values[n - 1] * std::exp((x - end) / e);
    } else {
      // Whole periods past the right end form a geometric series.
      const long double period = static_cast<long double>(n) * f.dx;
      long double one_period = 0.0L;
      const long double end = static_cast<long double>(f.x0) + period;
      for (std::size_t j = 0; j < n; ++j) {
        const long double a = end + static_cast<long double>(j) * f.dx;
        one_period += f.values[j] * (std::exp((x - a) / e) - std::exp((x - a - f.dx) / e));
      }
      acc += one_period / (1.0L - std::exp(-period / e));
    }
    q[i] = static_cast<double>(acc);
  }
  return q;
}

// Interval min (l <= r) or max (l > r) of f by dense sampling, refined twice
// around the best sample.
inline double dense_godunov(const nltraffic::VelocityModel& m, double l, double r) {
  const bool want_min = l <= r;
  double lo = std::min(l, r), hi = std::max(l, r);
  auto better = [&](double a, double b) { return want_min ? a < b : a > b; };
  double best = m.flux(l);
  if (better(m.flux(r), best)) best = m.flux(r);
  constexpr int kSamples = 4096;
  for (int pass = 0; pass < 3; ++pass) {
    const double h = (hi - lo) / (kSamples - 1);
    double arg = lo;
    double val = m.flux(lo);
    for (int k = 0; k < kSamples; ++k) {
      const double x = (k == kSamples - 1) ? hi : lo + k * h;
      const double fx = m.flux(x);
      if (better(fx, val)) {
        val = fx;
        arg = x;
      }
    }
    if (better(val, best)) best = val;
    const double a = std::min(l, r), b = std::max(l, r);
    lo = std::max(a, arg - h);
    hi = std::min(b, arg + h);
    if (!(hi > lo)) break;
  }
  return best;
}

// Composite Simpson rule.
template <class F>
double simpson(F&& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Least squares in closed form on (log x, log y).
inline std::pair<double, double> loglog_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += std::log(x[k]);
    sy += std::log(y[k]);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

inline nltraffic::DensityField random_field(std::mt19937_64& rng, std::size_t n, double dx,
                                            nltraffic::Boundary b = nltraffic::Boundary::constant_extension) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nltraffic::DensityField f;
  f.x0 = -0.5 * static_cast<double>(n) * dx;
  f.dx = dx;
  f.boundary = b;
  f.values.resize(n);
  for (auto& v : f.values) v = u(rng);
  return f;
}

inline nltraffic::DensityField sampled(double x0, double x1, std::size_t n, double (*g)(double),
                                       nltraffic::Boundary b = nltraffic::Boundary::constant_extension) {
  nltraffic::DensityField f;
  f.x0 = x0;
  f.dx = (x1 - x0) / static_cast<double>(n);
  f.boundary = b;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = g(f.center(i));
  return f;
}

inline double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  return worst;
}

}  // namespace oracle
