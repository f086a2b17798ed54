// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   1  shock convergence            5  vanishing coupling rates
//   2  entropy selection            6  kernel exactness
//   3  entropy residual certificate 7  structural invariants
//   4  proof-structure identities   8  oracle agreement

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nltraffic/config.hpp"
#include "nltraffic/entropy_audit.hpp"
#include "nltraffic/harness.hpp"
#include "nltraffic/kernel.hpp"
#include "nltraffic/local_solver.hpp"
#include "nltraffic/riemann.hpp"
#include "oracles.hpp"

using namespace nltraffic;

namespace {

struct Scenario {
  std::string name;
  RunConfig config;
  StudyResult study;
};

RunConfig base(const std::string& scenario, const std::string& initial) {
  return parse_config(R"({"scenario": ")" + scenario + R"(", "model": {"kind": "greenshields"},
    "domain": {"x_min": -2, "x_max": 2, "dx": 0.001}, "initial": )" + initial + "}");
}

RunConfig sine_config() {
  RunConfig c;
  c.scenario = "d-sine";
  c.model = ModelSpec{VelocityKind::greenshields, 1.0, {1.0}, 1.0};
  c.domain = {0.0, 2 * M_PI, 2 * M_PI / 6400, Boundary::periodic};
  c.initial.kind = InitialKind::sine;
  c.initial.mean = 0.5;
  c.initial.amplitude = 0.3;
  c.initial.wavenumber = 1.0;
  c.t_end = 2.5;  // gradient catastrophe of the local law at t = 1/0.6
  c.window = {0.0, 2 * M_PI};
  c.reference_dx = c.domain.dx / 4;
  c.audit_times = {0.2, 0.5, 1.0, 2.5};
  return c;
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const VelocityModel green = VelocityModel::greenshields();

  std::vector<Scenario> suite;
  suite.push_back({"a-shock", base("a-shock", R"({"type": "riemann", "rho_l": 0.2, "rho_r": 0.8})"), {}});
  suite.push_back({"b-rarefaction", base("b-rarefaction", R"({"type": "riemann", "rho_l": 0.8, "rho_r": 0.2})"), {}});
  suite.push_back({"c-three-state",
                   base("c-three-state", R"({"type": "piecewise", "breakpoints": [-0.1, 0.05], "values": [0.3, 0.7, 0.4]})"),
                   {}});
  suite.push_back({"d-sine", sine_config(), {}});
  for (auto& s : suite) {
    s.study = run_convergence_study(s.config);
    const auto& r = s.study.report;
    std::printf("[%s] verdict=%s%s%s\n", s.name.c_str(), std::string(to_string(r.verdict)).c_str(),
                r.failure.empty() ? "" : " failure=", r.failure.c_str());
    for (std::size_t k = 0; k < r.eps.size(); ++k)
      std::printf("  eps=%-7g L1=%.6e  tv_max=%.6f  residual_min=%+.3e\n", r.eps[k], r.errors[k], r.tv_max[k],
                  r.residual_min[k]);
    std::printf("  reference: tv_max=%.6f residual_min=%+.3e  tv_initial=%.6f", r.reference_tv_max,
                r.reference_residual_min, r.tv_initial);
    if (r.rate) std::printf("  fitted slope=%.3f", r.rate->slope);
    std::printf("\n");
  }
  const auto& shock = suite[0];
  const auto& fan = suite[1];
  const auto& sine = suite[3];

  // 1. Shock convergence.
  {
    const auto& e = shock.study.report.errors;
    bool ok = shock.study.report.failure.empty() && e.size() == 4;
    double worst = INFINITY;
    for (std::size_t k = 1; k < e.size(); ++k) {
      const double ratio = e[k - 1] / e[k];
      worst = std::min(worst, ratio);
      ok = ok && e[k] < e[k - 1] && ratio >= 1.3;
    }
    verdict(1, ok, fmt("smallest e(2eps)/e(eps) = %.3f (need >= 1.3)", worst));
  }

  // 2. Entropy selection: nearer the rarefaction than the stationary jump.
  {
    const auto& traj = fan.study.nonlocal.back();
    const auto& final = traj.at(0.5).field;
    const DensityField initial = make_initial_field(fan.config, fan.config.domain.dx);
    const auto exact = sample_riemann(riemann_similarity(green, 0.8, 0.2), initial, 0.0, 0.5);
    const Window w = fan.config.window;
    const double d_exact = l1_distance(final, exact, w);
    const double d_jump = l1_distance(final, initial, w);
    verdict(2, d_exact <= 0.5 * d_jump,
            fmt("d(exact) = %.4e", d_exact) + fmt(", d(stationary jump) = %.4e", d_jump) +
                fmt(", exact-vs-jump gap = %.4e", l1_distance(exact, initial, w)));
  }

  // 3. Entropy residual certificate and negative control.
  {
    bool ok = true;
    double worst = INFINITY;
    for (const auto& s : suite) {
      const auto& r = s.study.report;
      ok = ok && r.failure.empty() && r.residual_min.back() >= -kResidualTolerance &&
           r.reference_residual_min >= -kResidualTolerance;
      worst = std::min({worst, r.residual_min.back(), r.reference_residual_min});
    }
    // The expansion shock is stationary, so it is held over t in [0, 1]: the
    // largest bumps then have sigma_t = 0.4.
    auto control = base("control", R"({"type": "riemann", "rho_l": 0.8, "rho_r": 0.2})");
    control.t_end = 1.0;
    control.domain.x_min = -3.0;
    control.domain.x_max = 3.0;
    control.window = {-1.0, 1.0};
    const DensityField grid = make_initial_field(control, control.domain.dx);
    const auto jump = stationary_jump_trajectory(grid, 0.8, 0.2, 0.0, snapshot_schedule(control));
    const auto neg = audit_residuals(jump, green, standard_bumps(control, green));
    ok = ok && neg.min <= -kNegativeControlThreshold;
    verdict(3, ok,
            fmt("worst certified R/max(phi) = %+.3e (need >= -1e-3)", worst) +
                fmt("; expansion shock min R = %+.4e (need <= -1e-2)", neg.min) + " at " + neg.worst_id);
  }

  // 4. Proof structure on every audited frame of every nonlocal run.
  {
    double sign_worst = -INFINITY, split_worst = 0.0, resplit_worst = 0.0;
    std::string split_where, resplit_where;
    std::size_t frames = 0, over = 0;
    for (const auto& s : suite) {
      const VelocityModel m(s.config.model);
      const auto slices = standard_slices(s.config, m);
      for (std::size_t k = 0; k < s.study.nonlocal.size(); ++k) {
        double run_worst = 0.0;
        for (const auto& row : audit_frames(s.name, s.study.nonlocal[k], m, audit_schedule(s.config), slices)) {
          const auto& d = row.terms;
          const double scale = 1.0 + d.sum_abs();
          const double split = std::abs(d.split_residual()) / scale;
          const double resplit = std::abs(d.resplit_residual()) / scale;
          sign_worst = std::max({sign_worst, d.J23, d.J5});
          ++frames;
          if (split > 1e-6 || resplit > 1e-6) ++over;
          const std::string where = s.name + " eps=" + fmt("%g", row.eps) + " t=" + fmt("%g", row.t) + " " + row.phi_id;
          if (split > split_worst) split_worst = split, split_where = where;
          if (resplit > resplit_worst) resplit_worst = resplit, resplit_where = where;
          run_worst = std::max({run_worst, split, resplit});
        }
        std::printf("  J identities %-14s eps=%-7g worst relative residual %.3e\n", s.name.c_str(), s.config.eps[k],
                    run_worst);
      }
    }
    // Integration by parts on a resolved smooth state under dx halving.
    std::vector<double> parts;
    for (double dx : {1e-3, 5e-4, 2.5e-4}) {
      DensityField f{-2.0, dx, std::vector<double>(static_cast<std::size_t>(std::llround(4.0 / dx)))};
      for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = 0.5 - 0.3 * std::tanh(f.center(i) / 0.2);
      parts.push_back(std::abs(j_decomposition(make_nonlocal_state(f, 0.05), green, {0.0, 0.5}).parts_residual()));
    }
    const double r1 = parts[0] / parts[1], r2 = parts[1] / parts[2];
    std::printf("  J audit: %zu (frame, slice) pairs, %zu above 1e-6\n", frames, over);
    std::printf("  worst split   |J-(J1+J21+J22+J23)|/(1+sum) = %.3e at %s\n", split_worst, split_where.c_str());
    std::printf("  worst resplit |(J21+J22)-(J3+J4+J5)|/(1+sum) = %.3e at %s\n", resplit_worst, resplit_where.c_str());
    std::printf("  (J3+J4)+int[W(rho)-W(q)]phi_x: %.3e %.3e %.3e  ratios %.3f %.3f\n", parts[0], parts[1], parts[2], r1,
                r2);
    const bool signs = sign_worst <= 1e-12;
    const bool identities = split_worst <= 1e-6 && resplit_worst <= 1e-6;
    const bool converges = r1 >= 1.5 && r2 >= 1.5;
    verdict(4, signs && identities && converges,
            fmt("max(J23, J5) = %+.3e", sign_worst) + fmt("; identity residual %.3e (need <= 1e-6)",
                                                          std::max(split_worst, resplit_worst)) +
                fmt("; parts ratio %.3f (need >= 1.5)", std::min(r1, r2)));
  }

  // 5. Vanishing coupling on the sine scenario at t = 0.2.
  {
    const VelocityModel m(sine.config.model);
    double worst = INFINITY;
    for (const auto& phi : standard_slices(sine.config, m)) {
      std::vector<double> j1, j34;
      for (const auto& traj : sine.study.nonlocal) {
        const auto state = make_nonlocal_state(traj.at(0.2).field, traj.meta.eps, 0.2);
        const auto d = j_decomposition(state, m, phi);
        j1.push_back(std::abs(d.J1));
        j34.push_back(std::abs(d.J3 + d.J4));
      }
      worst = std::min({worst, oracle::loglog_line(sine.config.eps, j1).first,
                        oracle::loglog_line(sine.config.eps, j34).first});
    }
    verdict(5, worst >= 0.8, fmt("smallest slope over 9 slices = %.4f (need >= 0.8)", worst));
  }

  // 6. Kernel exactness.
  {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> cells(20, 600);
    std::uniform_real_distribution<double> scale(0.5, 60.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double dx = 1e-3;
      const auto f = oracle::random_field(rng, cells(rng), dx, k % 4 == 3 ? Boundary::periodic
                                                                          : Boundary::constant_extension);
      const double eps = scale(rng) * dx;
      worst = std::max(worst, oracle::max_rel(exp_average(f, eps).edges, oracle::direct_sum_q(f, eps)));
    }
    DensityField step{-1.0, 1e-3, std::vector<double>(2000)};
    for (std::size_t i = 0; i < step.size(); ++i) step.values[i] = i < 1000 ? 0.3 : 0.7;
    const double closed = 0.3 * (1 - std::exp(-1.0)) + 0.7 * std::exp(-1.0);
    const double step_err = std::abs(exp_average(step, 0.05).edges[950] - closed);
    verdict(6, worst <= 1e-13 && step_err <= 1e-14,
            fmt("direct-sum relative error %.3e", worst) + fmt(", step formula error %.3e", step_err));
  }

  // 7. Structural invariants.
  {
    double mass = 0.0, lo = INFINITY, hi = -INFINITY, tv_ratio = 0.0;
    auto account = [&](const Trajectory& t, double rho_jam) {
      mass = std::max(mass, std::abs(t.meta.mass_defect()) / std::abs(t.meta.mass_initial));
      lo = std::min(lo, t.meta.rho_min);
      hi = std::max(hi, t.meta.rho_max / rho_jam);
      tv_ratio = std::max(tv_ratio, t.meta.tv_max / t.meta.tv_initial);
    };
    for (const auto& s : suite) {
      for (const auto& t : s.study.nonlocal) account(t, s.config.model.rho_jam);
      account(s.study.reference, s.config.model.rho_jam);
    }
    std::vector<double> ode;
    for (std::size_t n : {1600, 3200, 6400}) {
      DensityField f{0.0, 2 * M_PI / n, std::vector<double>(n), Boundary::periodic};
      for (std::size_t i = 0; i < n; ++i) f.values[i] = 0.5 + 0.3 * std::sin(f.center(i));
      ode.push_back(check_ode_identity(f, exp_average(f, 0.05)).max_abs);
    }
    const double h1 = ode[0] / ode[1], h2 = ode[1] / ode[2];
    const bool ok = mass <= 1e-10 && lo >= 0.0 && hi <= 1.0 && tv_ratio <= 2.0 && h1 >= 1.7 && h1 <= 2.3 &&
                    h2 >= 1.7 && h2 <= 2.3;
    verdict(7, ok,
            fmt("mass defect %.2e", mass) + fmt(", rho in [%.4f", lo) + fmt(", %.4f]", hi) +
                fmt(", TV/TV0 %.4f", tv_ratio) + fmt(", ODE halving %.3f", h1) + fmt(" %.3f", h2));
  }

  // 8. Oracle agreement.
  {
    DensityField init{-2.0, 1e-3, std::vector<double>(4000)};
    for (std::size_t i = 0; i < init.size(); ++i) init.values[i] = init.center(i) < 0 ? 0.8 : 0.2;
    const auto traj = solve_local(init, green, 0.5, {}, {0.5});
    const auto exact = sample_riemann(riemann_similarity(green, 0.8, 0.2), init, 0.0, 0.5);
    const double l1 = l1_distance(traj.final().field, exact, {-2.0, 2.0});
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (const auto& m : {green, VelocityModel::quadratic(0.5, 1.0), VelocityModel::quadratic(0.1, 1.0)}) {
      const GodunovFlux g(m);
      for (int k = 0; k < 1000; ++k) {
        const double l = u(rng), r = u(rng);
        worst = std::max(worst, std::abs(g(l, r) - oracle::dense_godunov(m, l, r)));
      }
    }
    verdict(8, l1 <= 0.01 && worst <= 1e-10,
            fmt("Godunov-vs-exact L1 %.3e", l1) + fmt(", flux-vs-dense max error %.3e", worst));
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 8 criteria failed (%.1f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
