#pragma once

#include <string_view>
#include <vector>

#include "nltraffic/field.hpp"
#include "nltraffic/model.hpp"

namespace nltraffic {

enum class WaveKind {
  shock,
  rarefaction,
  /// Shock that touches the flux envelope tangentially on one side, i.e. a
  /// shock attached to a rarefaction fan.
  contact,
};

std::string_view to_string(WaveKind kind);

/// One elementary wave, ordered by speed. A shock has speed_lo == speed_hi.
struct Wave {
  WaveKind kind;
  double speed_lo;
  double speed_hi;
  double rho_from;  // state on the slow side
  double rho_to;    // state on the fast side
};

/// Self-similar entropy solution rho(x/t) of the local Riemann problem.
class RiemannSolution {
 public:
  RiemannSolution(VelocityModel model, double rho_left, double rho_right, std::vector<Wave> waves);

  double rho_left() const noexcept { return rho_left_; }
  double rho_right() const noexcept { return rho_right_; }
  const std::vector<Wave>& waves() const noexcept { return waves_; }

  /// rho at similarity coordinate xi = x/t. Exactly at a shock the slow-side
  /// (left) trace is returned.
  double operator()(double xi) const;

  double slowest_speed() const;
  double fastest_speed() const;

 private:
  double invert_characteristic_speed(double xi, double a, double b) const;

  VelocityModel model_;
  double rho_left_;
  double rho_right_;
  std::vector<Wave> waves_;
};

/// Lower convex envelope of f on [rho_l, rho_r] when rho_l <= rho_r, upper
/// concave envelope on [rho_r, rho_l] otherwise; chords become shocks and
/// coincidence arcs become rarefaction fans.
RiemannSolution riemann_similarity(const VelocityModel& model, double rho_l, double rho_r);

/// Cell averages of the solution centred at x_jump at time t on the grid of
/// `grid`, integrated with `subsamples` midpoint samples per cell.
DensityField sample_riemann(const RiemannSolution& solution, const DensityField& grid, double x_jump,
                            double t, int subsamples = 16);

}  // namespace nltraffic
