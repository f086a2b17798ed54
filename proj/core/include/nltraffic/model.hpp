#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nltraffic/polynomial.hpp"

namespace nltraffic {

inline constexpr double kDensitySlack = 1e-9;

enum class VelocityKind { greenshields, quadratic, custom_polynomial };

std::string_view to_string(VelocityKind kind);
VelocityKind parse_velocity_kind(std::string_view name);

/// User-facing description of a velocity law.
///
/// params by kind:
///   greenshields       [] or [v_max]       v = v_max (1 - rho/rho_jam)
///   quadratic          [c] or [a, c]       v = a (rho_jam - rho) + c (rho_jam - rho)^2, a defaults to delta_star
///   custom-polynomial  [c0, c1, ...]       v = sum_k c_k rho^k
struct ModelSpec {
  VelocityKind kind = VelocityKind::greenshields;
  double rho_jam = 1.0;
  std::vector<double> params;
  double delta_star = 1.0;

  bool operator==(const ModelSpec&) const = default;
};

/// Decreasing velocity law v on [0, rho_jam] with v(rho_jam) = 0 and
/// v' <= -delta_star. Immutable; every built-in kind is a polynomial, so the
/// entropy flux psi and the auxiliary W are kept as exact antiderivatives.
class VelocityModel {
 public:
  explicit VelocityModel(ModelSpec spec);

  static VelocityModel greenshields(double v_max = 1.0, double rho_jam = 1.0);
  static VelocityModel quadratic(double delta_star, double c, double rho_jam = 1.0);
  static VelocityModel custom(std::vector<double> coefficients, double rho_jam, double delta_star);

  const ModelSpec& spec() const noexcept { return spec_; }
  VelocityKind kind() const noexcept { return spec_.kind; }
  double rho_jam() const noexcept { return spec_.rho_jam; }
  double delta_star() const noexcept { return spec_.delta_star; }
  std::string describe() const;

  double velocity(double rho) const noexcept;
  double velocity_derivative(double rho) const noexcept;
  double flux(double rho) const noexcept { return rho * velocity(rho); }
  double flux_derivative(double rho) const noexcept;
  double flux_second_derivative(double rho) const noexcept;
  double psi(double rho) const noexcept { return psi_(rho); }
  double w(double rho) const noexcept { return w_(rho); }

  /// v(0), the largest velocity of a valid model.
  double max_velocity() const noexcept { return velocity(0.0); }
  /// max |f'| over [0, rho_jam] (dense sampling plus the extrema of f').
  double max_characteristic_speed() const noexcept { return max_char_speed_; }

  /// Clamp rho into [0, rho_jam] when it drifts by at most slack; DomainError otherwise.
  double checked_density(double rho, double slack = kDensitySlack) const;

  /// Monomial form of v in rho.
  const Polynomial& velocity_polynomial() const noexcept { return v_rho_; }
  const Polynomial& flux_polynomial() const noexcept { return f_; }

 private:
  ModelSpec spec_;
  Polynomial v_jam_;     // v as a polynomial in (rho_jam - rho)
  Polynomial dv_jam_;    // dv/du in the same variable
  Polynomial v_rho_;
  Polynomial f_;
  Polynomial df_;
  Polynomial d2f_;
  Polynomial psi_;
  Polynomial w_;
  double max_char_speed_ = 0.0;
};

double local_flux(const VelocityModel& model, double rho, double slack = kDensitySlack);

struct EntropyValues {
  double eta;
  double psi;
};

/// eta = rho^2/2 and psi = int_0^rho [s v(s) + s^2 v'(s)] ds.
EntropyValues entropy_pair_eval(const VelocityModel& model, double rho);

/// W(rho) = int_0^rho s^2 v'(s) ds.
double w_eval(const VelocityModel& model, double rho);

struct ModelValidation {
  bool pass = false;
  double v_at_jam = 0.0;
  double max_derivative = 0.0;  // max of v' over the sample grid
  double margin = 0.0;          // max_derivative + delta_star, must be <= 1e-12
  double argmax_rho = 0.0;
  std::size_t samples = 0;
  std::string message;
};

ModelValidation validate_model(const VelocityModel& model, std::size_t samples = 4097);

}  // namespace nltraffic
