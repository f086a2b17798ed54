#include "nltraffic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "nltraffic/csv.hpp"
#include "nltraffic/errors.hpp"
#include "nltraffic/local_solver.hpp"
#include "nltraffic/nonlocal_solver.hpp"
#include "nltraffic/riemann.hpp"

namespace nltraffic {

namespace {

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

double half_window(const RunConfig& c) { return 0.5 * (c.window.hi - c.window.lo); }

/// Keep only the snapshots at t = 0 and the given times.
Trajectory thin(const Trajectory& traj, const std::vector<double>& times) {
  Trajectory out;
  out.meta = traj.meta;
  out.snapshots.push_back(traj.snapshots.front());
  for (double t : times) out.snapshots.push_back(traj.at(t));
  return out;
}

DensityField coarsen_to(const DensityField& field, std::size_t cells) {
  if (field.size() == cells) return field;
  if (cells == 0 || field.size() % cells != 0)
    throw UsageError("reference grid is not a refinement of the comparison grid");
  return coarsen(field, field.size() / cells);
}

}  // namespace

DensityField make_initial_field(const RunConfig& c, double dx) {
  const double length = c.domain.x_max - c.domain.x_min;
  const auto n = static_cast<std::size_t>(std::llround(length / dx));
  if (n == 0) throw UsageError("grid has no cells");
  DensityField f{c.domain.x_min, length / static_cast<double>(n), std::vector<double>(n), c.domain.boundary};
  const auto& in = c.initial;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = f.edge(i);
    const double b = f.edge(i + 1);
    double avg = 0.0;
    switch (in.kind) {
      case InitialKind::riemann:
        avg = (in.rho_l * overlap(a, b, -inf, in.x_jump) + in.rho_r * overlap(a, b, in.x_jump, inf)) / (b - a);
        break;
      case InitialKind::piecewise: {
        double lo = -inf;
        for (std::size_t k = 0; k < in.values.size(); ++k) {
          const double hi = k < in.breakpoints.size() ? in.breakpoints[k] : inf;
          avg += in.values[k] * overlap(a, b, lo, hi);
          lo = hi;
        }
        avg /= (b - a);
        break;
      }
      case InitialKind::sine:
        avg = in.mean + in.amplitude * (std::cos(in.wavenumber * a) - std::cos(in.wavenumber * b)) /
                            (in.wavenumber * (b - a));
        break;
    }
    f.values[i] = avg;
  }
  return f;
}

std::vector<double> audit_schedule(const RunConfig& c) {
  if (!c.audit_times.empty()) return normalize_snapshot_times(c.audit_times, c.t_end);
  return normalize_snapshot_times({0.25 * c.t_end, 0.5 * c.t_end, 0.75 * c.t_end}, c.t_end);
}

std::vector<double> snapshot_schedule(const RunConfig& c) {
  std::vector<double> times =
      c.snapshot_times.empty() ? uniform_snapshot_times(c.t_end, c.snapshot_count) : c.snapshot_times;
  const auto audits = audit_schedule(c);
  times.insert(times.end(), audits.begin(), audits.end());
  return normalize_snapshot_times(times, c.t_end);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw DomainError("fit_rate needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [e, err] : points) {
    if (!(e > 0.0) || !(err > 0.0)) throw DomainError("fit_rate needs positive eps and errors");
    sx += std::log(e);
    sy += std::log(err);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [e, err] : points) {
    const double dx = std::log(e) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx == 0.0) throw DomainError("fit_rate needs at least two distinct eps values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [e, err] : points)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(std::log(err) - (fit.intercept + fit.slope * std::log(e))));
  return fit;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converges_to_entropy_solution:
      return "converges-to-entropy-solution";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::negative_control_detected:
      return "negative-control-detected";
  }
  return "unknown";
}

Verdict decide_verdict(const VerdictInputs& in) {
  if (in.failed) return Verdict::inconclusive;
  if (in.limit_residual_min <= -kNegativeControlThreshold) return Verdict::negative_control_detected;
  if (in.errors.empty()) return Verdict::inconclusive;
  for (double e : in.errors)
    if (!std::isfinite(e)) return Verdict::inconclusive;
  for (std::size_t k = 1; k < in.errors.size(); ++k) {
    const double prev = in.errors[k - 1];
    const double cur = in.errors[k];
    if (std::max(prev, cur) <= kErrorFloor) continue;
    if (!(cur < prev)) return Verdict::inconclusive;
  }
  if (in.final_residual_min < -kResidualTolerance || in.limit_residual_min < -kResidualTolerance)
    return Verdict::inconclusive;
  return Verdict::converges_to_entropy_solution;
}

std::vector<double> fan_centers(const RunConfig& c, const VelocityModel& model, double t0) {
  const double hw = half_window(c);
  const auto& in = c.initial;
  if (in.kind == InitialKind::sine) {
    const double len = c.window.hi - c.window.lo;
    return {c.window.lo + 0.25 * len, c.window.lo + 0.5 * len, c.window.lo + 0.75 * len};
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto add_fan = [&](double rl, double rr, double x) {
    const auto sol = riemann_similarity(model, rl, rr);
    lo = std::min(lo, x + sol.slowest_speed() * t0);
    hi = std::max(hi, x + sol.fastest_speed() * t0);
  };
  if (in.kind == InitialKind::riemann) {
    add_fan(in.rho_l, in.rho_r, in.x_jump);
  } else {
    for (std::size_t k = 0; k < in.breakpoints.size(); ++k)
      add_fan(in.values[k], in.values[k + 1], in.breakpoints[k]);
    if (in.breakpoints.empty()) lo = hi = 0.5 * (c.window.lo + c.window.hi);
  }
  const double mid = 0.5 * (lo + hi);
  const double spread = std::max(0.5 * (hi - lo), 0.25 * hw);
  return {mid - spread, mid, mid + spread};
}

std::vector<TestFunction> standard_bumps(const RunConfig& c, const VelocityModel& model) {
  const double t0 = 0.5 * c.t_end;
  return bump_family(t0, fan_centers(c, model, t0), c.t_end, half_window(c));
}

std::vector<SpatialTestFunction> standard_slices(const RunConfig& c, const VelocityModel& model) {
  std::vector<SpatialTestFunction> out;
  for (double x0 : fan_centers(c, model, 0.5 * c.t_end))
    for (double r : {0.1, 0.25, 0.4}) out.push_back({x0, r * half_window(c)});
  return out;
}

ResidualSummary audit_residuals(const Trajectory& traj, const VelocityModel& model,
                                const std::vector<TestFunction>& family) {
  ResidualSummary s;
  s.min = std::numeric_limits<double>::infinity();
  for (const auto& phi : family) {
    const double r = entropy_residual(traj, model, phi) / phi.max_value();
    s.values.push_back(r);
    if (r < s.min) {
      s.min = r;
      s.worst_id = phi.id;
    }
  }
  return s;
}

std::vector<AuditRow> audit_frames(const std::string& scenario, const Trajectory& traj,
                                   const VelocityModel& model, const std::vector<double>& frame_times,
                                   const std::vector<SpatialTestFunction>& slices) {
  std::vector<AuditRow> rows;
  const double eps = traj.meta.eps;
  if (!(eps > 0.0)) throw UsageError("audit_frames needs a nonlocal trajectory");
  for (double t : frame_times) {
    const auto& snap = traj.at(t);
    const NonlocalState state = make_nonlocal_state(snap.field, eps, snap.t);
    const double tv = total_variation(snap.field);
    for (std::size_t k = 0; k < slices.size(); ++k) {
      std::ostringstream id;
      id << "s" << k / 3 << "_x" << k % 3;
      rows.push_back({scenario, eps, snap.t, id.str(), j_decomposition(state, model, slices[k]), tv});
    }
  }
  return rows;
}

Trajectory stationary_jump_trajectory(const DensityField& grid, double rho_l, double rho_r, double x_jump,
                                      const std::vector<double>& times) {
  DensityField f = grid;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f.edge(i);
    const double b = f.edge(i + 1);
    f.values[i] = (rho_l * overlap(a, b, -inf, x_jump) + rho_r * overlap(a, b, x_jump, inf)) / (b - a);
  }
  Trajectory traj;
  traj.meta.solver = "synthetic-stationary-jump";
  traj.meta.dx = f.dx;
  traj.meta.boundary = f.boundary;
  traj.meta.mass_initial = traj.meta.mass_final = f.mass();
  traj.meta.tv_initial = traj.meta.tv_max = total_variation(f);
  traj.snapshots.push_back({0.0, f});
  for (double t : times)
    if (t > 0.0) traj.snapshots.push_back({t, f});
  return traj;
}

StudyResult run_convergence_study(const RunConfig& c, const std::optional<Trajectory>& limit_candidate) {
  const VelocityModel model(c.model);
  const auto check = validate_model(model);
  if (!check.pass) throw InvalidModelError("velocity model fails (A1): " + check.message);

  StudyResult out;
  auto& rep = out.report;
  rep.scenario = c.scenario;
  rep.eps = c.eps;

  const auto times = snapshot_schedule(c);
  const DensityField initial = make_initial_field(c, c.domain.dx);
  rep.tv_initial = total_variation(initial);
  out.bumps = standard_bumps(c, model);

  std::vector<std::string> failures;

  // Limit candidate: the Godunov reference unless one is injected.
  auto reference_task = std::async(std::launch::async, [&]() -> Trajectory {
    if (limit_candidate) return *limit_candidate;
    const DensityField fine = make_initial_field(c, c.reference_dx);
    return solve_local(fine, model, c.t_end, LocalOptions{c.cfl, c.max_halvings, kDensitySlack}, times);
  });

  NonlocalOptions opts;
  opts.cfl = c.cfl;
  opts.integrator = c.integrator;
  opts.max_halvings = c.max_halvings;
  std::vector<std::future<Trajectory>> runs;
  for (double eps : c.eps)
    runs.push_back(std::async(std::launch::async,
                              [&, eps] { return solve_nonlocal(initial, model, eps, c.t_end, opts, times); }));

  bool have_reference = false;
  try {
    out.reference = reference_task.get();
    have_reference = true;
  } catch (const Error& e) {
    failures.push_back(std::string("reference: ") + e.what());
  }

  for (std::size_t k = 0; k < runs.size(); ++k) {
    try {
      out.nonlocal.push_back(runs[k].get());
    } catch (const Error& e) {
      std::ostringstream os;
      os << "eps=" << c.eps[k] << ": " << e.what();
      failures.push_back(os.str());
      out.nonlocal.push_back(Trajectory{});
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (have_reference) {
    try {
      const auto s = audit_residuals(out.reference, model, out.bumps);
      rep.reference_residual_min = s.min;
      rep.reference_tv_max = out.reference.meta.tv_max;
    } catch (const Error& e) {
      failures.push_back(std::string("reference audit: ") + e.what());
    }
  }

  for (std::size_t k = 0; k < c.eps.size(); ++k) {
    const Trajectory& traj = out.nonlocal[k];
    double error = nan;
    double resid = nan;
    double tv = nan;
    if (!traj.snapshots.empty()) {
      tv = traj.meta.tv_max;
      try {
        if (have_reference) {
          auto distance_at = [&](double t) {
            const DensityField& mine = traj.at(t).field;
            return l1_distance(mine, coarsen_to(out.reference.at(t).field, mine.size()), c.window);
          };
          if (c.error_norm == ErrorNorm::final_time) {
            error = distance_at(c.t_end);
          } else {
            error = 0.0;
            double prev_t = 0.0;
            double prev = distance_at(0.0);
            for (double t : times) {
              const double cur = distance_at(t);
              error += 0.5 * (prev + cur) * (t - prev_t);
              prev = cur;
              prev_t = t;
            }
          }
        }
        resid = audit_residuals(traj, model, out.bumps).min;
      } catch (const Error& e) {
        std::ostringstream os;
        os << "eps=" << c.eps[k] << " audit: " << e.what();
        failures.push_back(os.str());
      }
    }
    rep.errors.push_back(error);
    rep.residual_min.push_back(resid);
    rep.tv_max.push_back(tv);
  }

  std::vector<std::pair<double, double>> pts;
  bool positive = rep.errors.size() >= 2;
  for (std::size_t k = 0; k < rep.errors.size(); ++k) {
    if (!(rep.errors[k] > 0.0)) positive = false;
    pts.emplace_back(rep.eps[k], rep.errors[k]);
  }
  if (positive) rep.rate = fit_rate(pts);

  for (const auto& f : failures) {
    if (!rep.failure.empty()) rep.failure += "; ";
    rep.failure += f;
  }
  VerdictInputs vin;
  vin.errors = rep.errors;
  vin.final_residual_min = rep.residual_min.empty() ? nan : rep.residual_min.back();
  vin.limit_residual_min = rep.reference_residual_min;
  vin.failed = !failures.empty() || !std::isfinite(vin.final_residual_min);
  rep.verdict = decide_verdict(vin);
  return out;
}

ConvergenceReport convergence_study(const RunConfig& config, const std::optional<Trajectory>& limit_candidate) {
  return run_convergence_study(config, limit_candidate).report;
}

std::string report_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "scenario,run,eps,l1_error,tv_max,tv_initial,residual_min,rate_slope,verdict\n";
  const std::string slope = r.rate ? format_double(r.rate->slope) : "";
  for (std::size_t k = 0; k < r.eps.size(); ++k)
    os << r.scenario << ",nonlocal," << format_double(r.eps[k]) << "," << format_double(r.errors[k]) << ","
       << format_double(r.tv_max[k]) << "," << format_double(r.tv_initial) << ","
       << format_double(r.residual_min[k]) << "," << slope << "," << to_string(r.verdict) << "\n";
  os << r.scenario << ",reference,,," << format_double(r.reference_tv_max) << ","
     << format_double(r.tv_initial) << "," << format_double(r.reference_residual_min) << "," << slope << ","
     << to_string(r.verdict) << "\n";
  return os.str();
}

std::string audit_csv(const std::vector<AuditRow>& rows) {
  std::ostringstream os;
  os << "scenario,eps,t,phi_id,J,J1,J21,J22,J23,J3,J4,J5,w_check,split_residual,resplit_residual,"
        "parts_residual,tv\n";
  for (const auto& r : rows) {
    const auto& d = r.terms;
    os << r.scenario << "," << format_double(r.eps) << "," << format_double(r.t) << "," << r.phi_id;
    for (double v : {d.J, d.J1, d.J21, d.J22, d.J23, d.J3, d.J4, d.J5, d.w_check, d.split_residual(),
                     d.resplit_residual(), d.parts_residual(), r.tv})
      os << "," << format_double(v);
    os << "\n";
  }
  return os.str();
}

namespace {

std::string eps_dir(double eps) { return "eps_" + format_double(eps); }

}  // namespace

std::string plot_script(const RunConfig& c, const StudyResult& study) {
  std::ostringstream os;
  os << "# gnuplot script: final-time profiles and L1 errors for scenario " << c.scenario << "\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 1200,500\n"
     << "set output 'profiles.png'\n"
     << "set xlabel 'x'\nset ylabel 'rho'\n"
     << "set xrange [" << c.window.lo << ":" << c.window.hi << "]\n"
     << "plot 'reference/trajectory.csv' every ::1 using ($1==" << format_double(c.t_end)
     << " ? $2 : 1/0):3 with lines lw 2 title 'entropy solution'";
  for (double eps : c.eps)
    os << ", \\\n     '" << eps_dir(eps) << "/trajectory.csv' every ::1 using ($1==" << format_double(c.t_end)
       << " ? $2 : 1/0):3 with lines title 'eps=" << eps << "'";
  os << "\n\nset output 'errors.png'\nset logscale xy\nset xlabel 'eps'\nset ylabel 'L1 error'\n"
     << "plot 'report.csv' every ::1 using (strcol(2) eq 'nonlocal' ? $3 : 1/0):4 with linespoints title 'L1 error'\n";
  (void)study;
  return os.str();
}

void write_study_outputs(const RunConfig& c, const StudyResult& study) {
  const std::string base = c.output + "/" + c.scenario + "/";
  write_text_file(base + "report.csv", report_csv(study.report));
  const auto frames = audit_schedule(c);
  for (std::size_t k = 0; k < study.nonlocal.size(); ++k)
    if (!study.nonlocal[k].snapshots.empty())
      write_csv_trajectory(thin(study.nonlocal[k], frames), base + eps_dir(c.eps[k]) + "/trajectory.csv");
  if (!study.reference.snapshots.empty()) {
    Trajectory ref = thin(study.reference, frames);
    const std::size_t cells = c.domain.cells();
    for (auto& s : ref.snapshots) s.field = coarsen_to(s.field, cells);
    write_csv_trajectory(ref, base + "reference/trajectory.csv");
  }
  write_text_file(base + "plot.gp", plot_script(c, study));
}

}  // namespace nltraffic
