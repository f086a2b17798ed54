#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nltraffic/config.hpp"
#include "nltraffic/entropy_audit.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/trajectory.hpp"

namespace nltraffic {

/// Exact cell averages of the configured initial data on the domain with
/// spacing dx.
DensityField make_initial_field(const RunConfig& config, double dx);

/// Snapshot schedule: explicit times, else snapshot_count uniform frames,
/// always merged with the audit times.
std::vector<double> snapshot_schedule(const RunConfig& config);
std::vector<double> audit_schedule(const RunConfig& config);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // largest |log e - (intercept + slope log eps)|
};

/// Least-squares line through (log eps, log error).
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

enum class Verdict { converges_to_entropy_solution, inconclusive, negative_control_detected };

std::string_view to_string(Verdict v);

inline constexpr double kResidualTolerance = 1e-3;      // R(phi) >= -tol * max phi
inline constexpr double kNegativeControlThreshold = 1e-2;  // R(phi) <= -threshold flags a violation
inline constexpr double kErrorFloor = 1e-12;

struct VerdictInputs {
  std::vector<double> errors;        // per eps, decreasing eps
  double final_residual_min = 0.0;   // finest-eps nonlocal run
  double limit_residual_min = 0.0;   // reference or injected limit candidate
  bool failed = false;
};

/// converges iff no failure, errors strictly decrease (pairs both under
/// kErrorFloor count as equal-to-zero), and both residual minima stay above
/// -kResidualTolerance; negative control iff the limit candidate's worst
/// residual is <= -kNegativeControlThreshold.
Verdict decide_verdict(const VerdictInputs& in);

/// Bump centers on the wave fan at time t0.
std::vector<double> fan_centers(const RunConfig& config, const VelocityModel& model, double t0);

/// 27-member test-function family for the scenario (t0 = t_end / 2).
std::vector<TestFunction> standard_bumps(const RunConfig& config, const VelocityModel& model);

/// Spatial slices (3 centers x 3 radii) for the J-term audit.
std::vector<SpatialTestFunction> standard_slices(const RunConfig& config, const VelocityModel& model);

struct ResidualSummary {
  double min = 0.0;  // min over the family of R(phi) / max phi
  std::string worst_id;
  std::vector<double> values;
};

ResidualSummary audit_residuals(const Trajectory& traj, const VelocityModel& model,
                                const std::vector<TestFunction>& family);

struct AuditRow {
  std::string scenario;
  double eps;
  double t;
  std::string phi_id;
  JDecomposition terms;
  double tv;
};

/// J-decomposition of every audit frame of a nonlocal trajectory against
/// every spatial slice.
std::vector<AuditRow> audit_frames(const std::string& scenario, const Trajectory& traj,
                                   const VelocityModel& model, const std::vector<double>& frame_times,
                                   const std::vector<SpatialTestFunction>& slices);

struct ConvergenceReport {
  std::string scenario;
  std::vector<double> eps;
  std::vector<double> errors;
  std::vector<double> tv_max;
  std::vector<double> residual_min;
  std::optional<RateFit> rate;
  double reference_residual_min = 0.0;
  double reference_tv_max = 0.0;
  double tv_initial = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string failure;
};

struct StudyResult {
  ConvergenceReport report;
  std::vector<Trajectory> nonlocal;  // one per eps, decreasing eps
  Trajectory reference;              // Godunov reference or injected candidate
  std::vector<TestFunction> bumps;
};

/// Godunov reference once, nonlocal solver per eps, L1 errors on the window,
/// entropy audits, verdict. Solver failures are reported, not thrown.
StudyResult run_convergence_study(const RunConfig& config,
                                  const std::optional<Trajectory>& limit_candidate = std::nullopt);

ConvergenceReport convergence_study(const RunConfig& config,
                                    const std::optional<Trajectory>& limit_candidate = std::nullopt);

/// Stationary discontinuity rho_l | rho_r at x_jump held at every time of the
/// schedule (plus t = 0). For rho_l > rho_r with f(rho_l) = f(rho_r) this is
/// the classic entropy-violating weak solution.
Trajectory stationary_jump_trajectory(const DensityField& grid, double rho_l, double rho_r, double x_jump,
                                      const std::vector<double>& times);

/// CSV tables and plotting script for a finished study under config.output.
void write_study_outputs(const RunConfig& config, const StudyResult& study);
std::string report_csv(const ConvergenceReport& report);
std::string audit_csv(const std::vector<AuditRow>& rows);
std::string plot_script(const RunConfig& config, const StudyResult& study);

}  // namespace nltraffic
