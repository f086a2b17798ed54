#include "nltraffic/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "nltraffic/errors.hpp"

namespace nltraffic {

namespace {

constexpr int kEnvelopeSamples = 4096;
constexpr double kBreakpointTolerance = 1e-12;

struct Segment {
  double a;
  double b;
  bool chord;
};

// Solve g'(p) (p - anchor) = g(p) - g(anchor) for p in [lo, hi] by bisection.
template <class G, class DG>
bool refine_tangent(const G& g, const DG& dg, double anchor, double& p, double lo, double hi) {
  auto h = [&](double x) { return dg(x) * (x - anchor) - (g(x) - g(anchor)); };
  double hl = h(lo);
  double hh = h(hi);
  if (hl == 0.0) {
    p = lo;
    return true;
  }
  if (hh == 0.0) {
    p = hi;
    return true;
  }
  if ((hl < 0.0) == (hh < 0.0)) return false;
  while (hi - lo > kBreakpointTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if ((hm < 0.0) == (hl < 0.0)) {
      lo = mid;
      hl = hm;
    } else {
      hi = mid;
    }
  }
  p = 0.5 * (lo + hi);
  return true;
}

}  // namespace

std::string_view to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::shock:
      return "shock";
    case WaveKind::rarefaction:
      return "rarefaction";
    case WaveKind::contact:
      return "contact";
  }
  return "unknown";
}

RiemannSolution::RiemannSolution(VelocityModel model, double rho_left, double rho_right,
                                 std::vector<Wave> waves)
    : model_(std::move(model)), rho_left_(rho_left), rho_right_(rho_right), waves_(std::move(waves)) {}

double RiemannSolution::slowest_speed() const { return waves_.empty() ? 0.0 : waves_.front().speed_lo; }
double RiemannSolution::fastest_speed() const { return waves_.empty() ? 0.0 : waves_.back().speed_hi; }

double RiemannSolution::invert_characteristic_speed(double xi, double a, double b) const {
  // f' is monotone on a fan; keep the bracket oriented by the sign of the slope.
  double fa = model_.flux_derivative(a) - xi;
  if (fa == 0.0) return a;
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = model_.flux_derivative(m) - xi;
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double RiemannSolution::operator()(double xi) const {
  for (const auto& w : waves_) {
    if (xi < w.speed_lo) return w.rho_from;
    if (w.kind != WaveKind::rarefaction) {
      if (xi <= w.speed_lo) return w.rho_from;
      continue;
    }
    if (xi <= w.speed_hi) return invert_characteristic_speed(xi, w.rho_from, w.rho_to);
  }
  return rho_right_;
}

RiemannSolution riemann_similarity(const VelocityModel& model, double rho_l, double rho_r) {
  rho_l = model.checked_density(rho_l);
  rho_r = model.checked_density(rho_r);
  if (rho_l == rho_r) return RiemannSolution(model, rho_l, rho_r, {});

  // Work with the lower convex envelope of g = sign * f on [lo, hi].
  const bool increasing = rho_l < rho_r;
  const double sign = increasing ? 1.0 : -1.0;
  const double lo = std::min(rho_l, rho_r);
  const double hi = std::max(rho_l, rho_r);
  auto g = [&](double x) { return sign * model.flux(x); };
  auto dg = [&](double x) { return sign * model.flux_derivative(x); };
  auto d2g = [&](double x) { return sign * model.flux_second_derivative(x); };

  std::vector<double> xs(kEnvelopeSamples + 1);
  std::vector<double> ys(kEnvelopeSamples + 1);
  for (int k = 0; k <= kEnvelopeSamples; ++k) {
    xs[k] = k == kEnvelopeSamples ? hi : lo + (hi - lo) * k / kEnvelopeSamples;
    ys[k] = g(xs[k]);
  }

  // Andrew's monotone chain, lower hull only.
  std::vector<int> hull;
  for (int k = 0; k <= kEnvelopeSamples; ++k) {
    while (hull.size() >= 2) {
      const int o = hull[hull.size() - 2];
      const int a = hull.back();
      const double cross = (xs[a] - xs[o]) * (ys[k] - ys[o]) - (ys[a] - ys[o]) * (xs[k] - xs[o]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }

  // Classify hull edges and merge coincidence arcs.
  std::vector<Segment> segs;
  for (std::size_t j = 0; j + 1 < hull.size(); ++j) {
    const int a = hull[j];
    const int b = hull[j + 1];
    const bool chord = (b - a > 1) || d2g(0.5 * (xs[a] + xs[b])) < 0.0;
    if (!chord && !segs.empty() && !segs.back().chord)
      segs.back().b = xs[b];
    else
      segs.push_back({xs[a], xs[b], chord});
  }

  // Pin tangency points of chords that border a fan.
  const double h = (hi - lo) / kEnvelopeSamples;
  for (int pass = 0; pass < 50; ++pass) {
    double moved = 0.0;
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (!segs[j].chord) continue;
      auto& s = segs[j];
      const bool tangent_right = j + 1 < segs.size() && !segs[j + 1].chord;
      const bool tangent_left = j > 0 && !segs[j - 1].chord;
      if (tangent_right) {
        double p = s.b;
        if (refine_tangent(g, dg, s.a, p, std::max(s.a + 0.5 * h, s.b - 2 * h), std::min(hi, s.b + 2 * h))) {
          moved = std::max(moved, std::abs(p - s.b));
          s.b = p;
          segs[j + 1].a = p;
        }
      }
      if (tangent_left) {
        double p = s.a;
        if (refine_tangent(g, dg, s.b, p, std::max(lo, s.a - 2 * h), std::min(s.b - 0.5 * h, s.a + 2 * h))) {
          moved = std::max(moved, std::abs(p - s.a));
          s.a = p;
          segs[j - 1].b = p;
        }
      }
    }
    if (moved <= kBreakpointTolerance) break;
  }

  std::vector<Wave> waves;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const auto& s = segs[j];
    const double from = increasing ? s.a : s.b;
    const double to = increasing ? s.b : s.a;
    if (s.chord) {
      const double speed = (model.flux(s.b) - model.flux(s.a)) / (s.b - s.a);
      const bool attached = (j > 0 && !segs[j - 1].chord) || (j + 1 < segs.size() && !segs[j + 1].chord);
      waves.push_back({attached ? WaveKind::contact : WaveKind::shock, speed, speed, from, to});
    } else {
      waves.push_back({WaveKind::rarefaction, model.flux_derivative(from), model.flux_derivative(to), from,
                       to});
    }
  }
  if (!increasing) std::reverse(waves.begin(), waves.end());
  waves.front().rho_from = rho_l;
  waves.back().rho_to = rho_r;
  return RiemannSolution(model, rho_l, rho_r, std::move(waves));
}

DensityField sample_riemann(const RiemannSolution& solution, const DensityField& grid, double x_jump,
                            double t, int subsamples) {
  if (!(t > 0.0)) throw DomainError("sample_riemann needs t > 0");
  DensityField out = grid;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < subsamples; ++k) {
      const double x = grid.edge(i) + grid.dx * (k + 0.5) / subsamples;
      s += solution((x - x_jump) / t);
    }
    out.values[i] = s / subsamples;
  }
  return out;
}

}  // namespace nltraffic
