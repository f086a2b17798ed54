#include "nltraffic/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "nltraffic/errors.hpp"

namespace nltraffic {

namespace {

constexpr double kJamTolerance = 1e-12;
constexpr double kSlopeTolerance = 1e-12;

Polynomial jam_to_rho(const Polynomial& p, double rho_jam) {
  // p(u) with u = rho_jam - rho, rewritten in powers of rho.
  return p.shifted(rho_jam).scaled_argument(-1.0);
}

Polynomial build_jam_form(const ModelSpec& s) {
  const auto& p = s.params;
  switch (s.kind) {
    case VelocityKind::greenshields: {
      if (p.size() > 1) throw InvalidModelError("greenshields takes at most one parameter (v_max)");
      const double v_max = p.empty() ? 1.0 : p[0];
      return Polynomial({0.0, v_max / s.rho_jam});
    }
    case VelocityKind::quadratic: {
      if (p.empty() || p.size() > 2) throw InvalidModelError("quadratic takes [c] or [a, c]");
      const double a = p.size() == 2 ? p[0] : s.delta_star;
      const double c = p.back();
      return Polynomial({0.0, a, c});
    }
    case VelocityKind::custom_polynomial: {
      if (p.empty()) throw InvalidModelError("custom-polynomial needs at least one coefficient");
      return jam_to_rho(Polynomial(p), s.rho_jam);
    }
  }
  throw InvalidModelError("unknown velocity kind");
}

}  // namespace

std::string_view to_string(VelocityKind kind) {
  switch (kind) {
    case VelocityKind::greenshields:
      return "greenshields";
    case VelocityKind::quadratic:
      return "quadratic";
    case VelocityKind::custom_polynomial:
      return "custom-polynomial";
  }
  return "unknown";
}

VelocityKind parse_velocity_kind(std::string_view name) {
  if (name == "greenshields") return VelocityKind::greenshields;
  if (name == "quadratic") return VelocityKind::quadratic;
  if (name == "custom-polynomial") return VelocityKind::custom_polynomial;
  throw InvalidModelError("unknown velocity kind '" + std::string(name) + "'");
}

VelocityModel::VelocityModel(ModelSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.rho_jam > 0.0) || !std::isfinite(spec_.rho_jam))
    throw DomainError("rho_jam must be positive and finite");
  if (!(spec_.delta_star > 0.0) || !std::isfinite(spec_.delta_star))
    throw DomainError("delta_star must be positive and finite");
  for (double c : spec_.params)
    if (!std::isfinite(c)) throw InvalidModelError("non-finite velocity parameter");

  v_jam_ = build_jam_form(spec_);
  dv_jam_ = v_jam_.derivative();
  v_rho_ = jam_to_rho(v_jam_, spec_.rho_jam);

  const Polynomial id({0.0, 1.0});
  const Polynomial id2({0.0, 0.0, 1.0});
  const Polynomial dv = v_rho_.derivative();
  f_ = id * v_rho_;
  df_ = f_.derivative();
  d2f_ = df_.derivative();
  psi_ = (id * v_rho_ + id2 * dv).antiderivative();
  w_ = (id2 * dv).antiderivative();

  constexpr int n = 4096;
  for (int k = 0; k <= n; ++k) {
    const double rho = spec_.rho_jam * k / n;
    max_char_speed_ = std::max(max_char_speed_, std::abs(flux_derivative(rho)));
  }
}

VelocityModel VelocityModel::greenshields(double v_max, double rho_jam) {
  return VelocityModel(ModelSpec{VelocityKind::greenshields, rho_jam, {v_max}, v_max / rho_jam});
}

VelocityModel VelocityModel::quadratic(double delta_star, double c, double rho_jam) {
  return VelocityModel(ModelSpec{VelocityKind::quadratic, rho_jam, {c}, delta_star});
}

VelocityModel VelocityModel::custom(std::vector<double> coefficients, double rho_jam, double delta_star) {
  return VelocityModel(
      ModelSpec{VelocityKind::custom_polynomial, rho_jam, std::move(coefficients), delta_star});
}

std::string VelocityModel::describe() const {
  auto num = [](double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  std::ostringstream os;
  os << to_string(spec_.kind) << "(rho_jam=" << num(spec_.rho_jam) << ",delta_star=" << num(spec_.delta_star)
     << ",params=[";
  for (std::size_t i = 0; i < spec_.params.size(); ++i) os << (i ? " " : "") << num(spec_.params[i]);
  os << "])";
  return os.str();
}

double VelocityModel::velocity(double rho) const noexcept { return v_jam_(spec_.rho_jam - rho); }

double VelocityModel::velocity_derivative(double rho) const noexcept {
  return -dv_jam_(spec_.rho_jam - rho);
}

double VelocityModel::flux_derivative(double rho) const noexcept {
  return velocity(rho) + rho * velocity_derivative(rho);
}

double VelocityModel::flux_second_derivative(double rho) const noexcept { return d2f_(rho); }

double VelocityModel::checked_density(double rho, double slack) const {
  if (!(rho >= -slack && rho <= spec_.rho_jam + slack)) {
    std::ostringstream os;
    os << "density " << rho << " outside [0, " << spec_.rho_jam << "]";
    throw DomainError(os.str());
  }
  return std::clamp(rho, 0.0, spec_.rho_jam);
}

double local_flux(const VelocityModel& model, double rho, double slack) {
  rho = model.checked_density(rho, slack);
  if (rho == 0.0 || rho == model.rho_jam()) return 0.0;
  return model.flux(rho);
}

EntropyValues entropy_pair_eval(const VelocityModel& model, double rho) {
  rho = model.checked_density(rho);
  return {0.5 * rho * rho, model.psi(rho)};
}

double w_eval(const VelocityModel& model, double rho) {
  rho = model.checked_density(rho);
  return std::min(model.w(rho), 0.0);
}

ModelValidation validate_model(const VelocityModel& model, std::size_t samples) {
  if (samples < 2) throw DomainError("validate_model needs at least two samples");
  ModelValidation r;
  r.samples = samples;
  r.v_at_jam = model.velocity(model.rho_jam());
  if (!std::isfinite(r.v_at_jam)) throw InvalidModelError("v(rho_jam) is not finite");

  r.max_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const double rho = model.rho_jam() * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double v = model.velocity(rho);
    const double dv = model.velocity_derivative(rho);
    if (!std::isfinite(v) || !std::isfinite(dv)) {
      std::ostringstream os;
      os << "non-finite velocity or derivative at rho=" << rho;
      throw InvalidModelError(os.str());
    }
    if (dv > r.max_derivative) {
      r.max_derivative = dv;
      r.argmax_rho = rho;
    }
  }
  r.margin = r.max_derivative + model.delta_star();

  const bool jam_ok = std::abs(r.v_at_jam) <= kJamTolerance;
  const bool slope_ok = r.margin <= kSlopeTolerance;
  r.pass = jam_ok && slope_ok;

  std::ostringstream os;
  os.precision(6);
  if (r.pass) {
    os << "ok: v(rho_jam)=" << r.v_at_jam << ", max v'=" << r.max_derivative << " <= -delta_star";
  } else {
    if (!jam_ok) os << "v(rho_jam)=" << r.v_at_jam << " is not zero; ";
    if (!slope_ok)
      os << "v'(" << r.argmax_rho << ")=" << r.max_derivative << " exceeds -delta_star="
         << -model.delta_star();
  }
  r.message = os.str();
  return r;
}

}  // namespace nltraffic
