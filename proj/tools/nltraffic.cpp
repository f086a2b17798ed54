// nltraffic: command-line driver for the nonlocal / local traffic solvers.
//
// Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nltraffic/config.hpp"
#include "nltraffic/csv.hpp"
#include "nltraffic/errors.hpp"
#include "nltraffic/harness.hpp"
#include "nltraffic/local_solver.hpp"
#include "nltraffic/nonlocal_solver.hpp"
#include "nltraffic/riemann.hpp"

using namespace nltraffic;

namespace {

enum Exit { ok = 0, validation = 1, numerical = 2, io = 3 };

struct ConfigArgs {
  std::string path;
  std::optional<std::string> out;
  std::optional<double> cfl;
};

struct ModelArgs {
  std::string kind = "greenshields";
  std::vector<double> params;
  double rho_jam = 1.0;
  std::optional<double> delta_star;
};

void add_config_args(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("config", a.path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "output directory (overrides the config)");
  cmd->add_option("--cfl", a.cfl, "CFL number in (0, 1] (overrides the config)");
}

void add_model_args(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--kind", m.kind, "greenshields | quadratic | custom-polynomial")->capture_default_str();
  cmd->add_option("--params", m.params, "kind parameters (see README)");
  cmd->add_option("--rho-jam", m.rho_jam, "jam density")->capture_default_str();
  cmd->add_option("--delta-star", m.delta_star, "lower bound on -v' (default v_max/rho_jam for greenshields)");
}

// Overrides go through the canonical document so they are validated like the file.
RunConfig load(const ConfigArgs& a) {
  RunConfig c = load_config(a.path);
  if (a.out) c.output = *a.out;
  if (a.cfl) c.cfl = *a.cfl;
  if (a.out || a.cfl) c = parse_config(to_document(c));
  for (const auto& w : config_warnings(c)) std::cerr << "warning: " << w << "\n";
  return c;
}

VelocityModel checked_model(const ModelSpec& spec) {
  VelocityModel m(spec);
  const auto v = validate_model(m);
  if (!v.pass) throw InvalidModelError(v.message);
  return m;
}

ModelSpec to_spec(const ModelArgs& a) {
  ModelSpec s;
  s.kind = parse_velocity_kind(a.kind);
  s.rho_jam = a.rho_jam;
  s.params = a.params;
  if (a.delta_star) {
    s.delta_star = *a.delta_star;
  } else if (s.kind == VelocityKind::greenshields) {
    s.delta_star = (a.params.empty() ? 1.0 : a.params[0]) / a.rho_jam;
  } else {
    throw UsageError("--delta-star is required for kind " + a.kind);
  }
  return s;
}

std::string base_dir(const RunConfig& c) { return c.output + "/" + c.scenario + "/"; }

int run_nonlocal(const ConfigArgs& a) {
  const RunConfig c = load(a);
  const VelocityModel m = checked_model(c.model);
  const DensityField init = make_initial_field(c, c.domain.dx);
  NonlocalOptions opt;
  opt.cfl = c.cfl;
  opt.integrator = c.integrator;
  opt.max_halvings = c.max_halvings;
  for (double eps : c.eps) {
    const Trajectory t = solve_nonlocal(init, m, eps, c.t_end, opt, snapshot_schedule(c));
    const std::string path = base_dir(c) + "eps_" + format_double(eps) + "/trajectory.csv";
    write_csv_trajectory(t, path);
    std::printf("eps=%-8g steps=%zu rejected=%zu mass_defect=%.3e tv_max=%.6f -> %s\n", eps, t.meta.steps,
                t.meta.rejected_steps, t.meta.mass_defect(), t.meta.tv_max, path.c_str());
  }
  return ok;
}

int run_local(const ConfigArgs& a) {
  const RunConfig c = load(a);
  const VelocityModel m = checked_model(c.model);
  const Trajectory t = solve_local(make_initial_field(c, c.domain.dx), m, c.t_end,
                                   LocalOptions{c.cfl, c.max_halvings, kDensitySlack}, snapshot_schedule(c));
  const std::string path = base_dir(c) + "local/trajectory.csv";
  write_csv_trajectory(t, path);
  std::printf("godunov steps=%zu mass_defect=%.3e tv_max=%.6f -> %s\n", t.meta.steps, t.meta.mass_defect(),
              t.meta.tv_max, path.c_str());
  return ok;
}

void print_report(const ConvergenceReport& r) {
  std::printf("scenario %s: %s\n", r.scenario.c_str(), std::string(to_string(r.verdict)).c_str());
  for (std::size_t k = 0; k < r.eps.size(); ++k)
    std::printf("  eps=%-8g L1=%.6e tv_max=%.6f residual_min=%+.3e\n", r.eps[k], r.errors[k], r.tv_max[k],
                r.residual_min[k]);
  std::printf("  reference residual_min=%+.3e tv_max=%.6f\n", r.reference_residual_min, r.reference_tv_max);
  if (r.rate) std::printf("  fitted slope %.4f (max fit residual %.3e)\n", r.rate->slope, r.rate->max_residual);
  if (!r.failure.empty()) std::printf("  failure: %s\n", r.failure.c_str());
}

int convergence(const ConfigArgs& a) {
  const RunConfig c = load(a);
  checked_model(c.model);
  const StudyResult s = run_convergence_study(c);
  write_study_outputs(c, s);
  print_report(s.report);
  std::printf("outputs in %s\n", base_dir(c).c_str());
  return s.report.failure.empty() ? ok : numerical;
}

int entropy_audit(const ConfigArgs& a) {
  const RunConfig c = load(a);
  const VelocityModel m = checked_model(c.model);
  const StudyResult s = run_convergence_study(c);
  if (!s.report.failure.empty()) {
    print_report(s.report);
    return numerical;
  }
  const auto frames = audit_schedule(c);
  const auto slices = standard_slices(c, m);
  std::vector<AuditRow> rows;
  for (const auto& t : s.nonlocal) {
    auto part = audit_frames(c.scenario, t, m, frames, slices);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_text_file(base_dir(c) + "audit.csv", audit_csv(rows));

  double sign = -1e300, split = 0.0, resplit = 0.0, parts = 0.0;
  for (const auto& r : rows) {
    const double scale = 1.0 + r.terms.sum_abs();
    sign = std::max({sign, r.terms.J23, r.terms.J5});
    split = std::max(split, std::abs(r.terms.split_residual()) / scale);
    resplit = std::max(resplit, std::abs(r.terms.resplit_residual()) / scale);
    parts = std::max(parts, std::abs(r.terms.parts_residual()) /
                                (1.0 + std::abs(r.terms.J3) + std::abs(r.terms.J4)));
  }
  print_report(s.report);
  std::printf("  %zu audit rows: max(J23, J5)=%+.3e split=%.3e resplit=%.3e parts=%.3e (relative)\n", rows.size(),
              sign, split, resplit, parts);
  std::printf("audit table in %saudit.csv\n", base_dir(c).c_str());
  return ok;
}

int riemann(const ModelArgs& ma, double rho_l, double rho_r, const std::optional<std::string>& out, int samples) {
  const VelocityModel m = checked_model(to_spec(ma));
  const RiemannSolution sol = riemann_similarity(m, rho_l, rho_r);
  std::printf("%s  rho_l=%g rho_r=%g\n", m.describe().c_str(), rho_l, rho_r);
  for (const auto& w : sol.waves())
    std::printf("  %-11s speed [%+.10f, %+.10f]  %.10f -> %.10f\n", std::string(to_string(w.kind)).c_str(),
                w.speed_lo, w.speed_hi, w.rho_from, w.rho_to);
  if (out) {
    const double lo = std::min(sol.slowest_speed(), 0.0) - 0.5;
    const double hi = std::max(sol.fastest_speed(), 0.0) + 0.5;
    std::string csv = "xi,rho\n";
    for (int k = 0; k < samples; ++k) {
      const double xi = lo + (hi - lo) * k / (samples - 1);
      csv += format_double(xi) + "," + format_double(sol(xi)) + "\n";
    }
    write_text_file(*out, csv);
    std::printf("profile rho(x/t) -> %s\n", out->c_str());
  }
  return ok;
}

int validate(const ModelArgs& ma) {
  const VelocityModel m(to_spec(ma));
  const auto v = validate_model(m);
  std::printf("%s\n  v(rho_jam) = %.3e\n  max v' = %.6f at rho = %.6f (%zu samples)\n  margin max v' + delta* = %.3e\n  %s\n",
              m.describe().c_str(), v.v_at_jam, v.max_derivative, v.argmax_rho, v.samples, v.margin,
              v.pass ? "PASS" : ("FAIL: " + v.message).c_str());
  return v.pass ? ok : validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nltraffic: nonlocal traffic flow with a look-ahead exponential kernel"};
  app.require_subcommand(1);

  ConfigArgs nl, loc, conv, audit;
  auto* c_nl = app.add_subcommand("run-nonlocal", "solve the nonlocal law for every eps of the config");
  add_config_args(c_nl, nl);
  auto* c_loc = app.add_subcommand("run-local", "solve the local law with the Godunov scheme");
  add_config_args(c_loc, loc);
  auto* c_conv = app.add_subcommand("convergence", "eps -> 0 convergence study against the Godunov reference");
  add_config_args(c_conv, conv);
  auto* c_audit = app.add_subcommand("entropy-audit", "convergence study plus the J-decomposition audit");
  add_config_args(c_audit, audit);

  ModelArgs rm, vm;
  double rho_l = 0.0, rho_r = 0.0;
  std::optional<std::string> r_out;
  int samples = 401;
  auto* c_riem = app.add_subcommand("riemann", "exact entropy solution of a local Riemann problem");
  add_model_args(c_riem, rm);
  c_riem->add_option("rho_l", rho_l, "left state")->required();
  c_riem->add_option("rho_r", rho_r, "right state")->required();
  c_riem->add_option("--out", r_out, "write the similarity profile xi,rho to this CSV");
  c_riem->add_option("--samples", samples, "profile samples")->check(CLI::Range(2, 1000000))->capture_default_str();
  auto* c_val = app.add_subcommand("validate-model", "check the velocity law hypotheses");
  add_model_args(c_val, vm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  try {
    if (*c_nl) return run_nonlocal(nl);
    if (*c_loc) return run_local(loc);
    if (*c_conv) return convergence(conv);
    if (*c_audit) return entropy_audit(audit);
    if (*c_riem) return riemann(rm, rho_l, rho_r, r_out, samples);
    if (*c_val) return validate(vm);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
    return validation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical;
  } catch (const IoError& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return io;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation;
  }
  return validation;
}
