#include <doctest.h>

#include <cmath>

#include "nltraffic/errors.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/polynomial.hpp"
#include "oracles.hpp"

using namespace nltraffic;

TEST_SUITE("model") {

TEST_CASE("polynomial helpers") {
  const Polynomial p({1.0, -2.0, 3.0});  // 1 - 2x + 3x^2
  CHECK(p(2.0) == doctest::Approx(9.0));
  CHECK(p.derivative()(2.0) == doctest::Approx(10.0));
  CHECK(p.antiderivative()(1.0) == doctest::Approx(1.0));  // x - x^2 + x^3
  CHECK(p.shifted(1.0)(0.5) == doctest::Approx(p(1.5)));
}

TEST_CASE("greenshields values") {
  const auto m = VelocityModel::greenshields(1.0, 1.0);
  CHECK(local_flux(m, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(local_flux(m, 0.0) == 0.0);
  CHECK(local_flux(m, 1.0) == 0.0);
  CHECK(m.velocity(1.0) == 0.0);
  CHECK(m.velocity_derivative(0.3) == doctest::Approx(-1.0));
  CHECK(m.max_characteristic_speed() == doctest::Approx(1.0));
  CHECK_THROWS_AS(local_flux(m, 1.2), DomainError);
  CHECK_THROWS_AS(local_flux(m, -0.1), DomainError);
  // Drift inside the slack is clamped.
  CHECK(local_flux(m, 1.0 + 1e-12) == 0.0);
}

TEST_CASE("entropy pair closed forms") {
  // greenshields: psi = rho^2/2 - 2 rho^3/3, W = -rho^3/3
  const auto m = VelocityModel::greenshields();
  for (double r : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const auto e = entropy_pair_eval(m, r);
    CHECK(e.eta == doctest::Approx(r * r / 2));
    CHECK(e.psi == doctest::Approx(r * r / 2 - 2 * r * r * r / 3).epsilon(1e-14));
    CHECK(w_eval(m, r) == doctest::Approx(-r * r * r / 3).epsilon(1e-14));
  }
}

TEST_CASE("psi' = rho (v + rho v') and W' = rho^2 v' by finite differences") {
  for (const auto& m : {VelocityModel::greenshields(1.3, 1.0), VelocityModel::quadratic(0.5, 0.8, 1.0),
                        VelocityModel::quadratic(0.1, 1.0, 1.0)}) {
    const double h = 1e-5;
    for (double r = 0.05; r < 0.96; r += 0.05) {
      const double dpsi = (m.psi(r + h) - m.psi(r - h)) / (2 * h);
      const double dw = (m.w(r + h) - m.w(r - h)) / (2 * h);
      const double v = m.velocity(r), dv = m.velocity_derivative(r);
      CHECK(dpsi == doctest::Approx(r * (v + r * dv)).epsilon(1e-8));
      CHECK(dw == doctest::Approx(r * r * dv).epsilon(1e-8));
    }
    // Closed forms agree with quadrature of their defining integrals.
    const double psi_q = oracle::simpson(
        [&](double s) { return s * m.velocity(s) + s * s * m.velocity_derivative(s); }, 0.0, 0.7);
    CHECK(m.psi(0.7) == doctest::Approx(psi_q).epsilon(1e-12));
  }
}

TEST_CASE("W is nonincreasing") {
  const auto m = VelocityModel::quadratic(0.2, 0.9);
  double prev = w_eval(m, 0.0);
  for (int k = 1; k <= 200; ++k) {
    const double cur = w_eval(m, k / 200.0);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("flux is Lipschitz with constant max|f'|") {
  const auto m = VelocityModel::quadratic(0.5, 1.0);
  const double L = m.max_characteristic_speed();
  for (int a = 0; a <= 50; ++a)
    for (int b = 0; b <= 50; ++b) {
      const double x = a / 50.0, y = b / 50.0;
      CHECK(std::abs(m.flux(x) - m.flux(y)) <= L * std::abs(x - y) + 1e-14);
    }
}

TEST_CASE("validate_model accepts the built-ins") {
  for (const auto& m : {VelocityModel::greenshields(), VelocityModel::quadratic(0.5, 1.0),
                        VelocityModel::quadratic(0.1, 1.0)}) {
    const auto v = validate_model(m);
    CHECK(v.pass);
    CHECK(std::abs(v.v_at_jam) <= 1e-12);
    CHECK(v.margin <= 1e-12);
  }
}

TEST_CASE("validate_model rejects a velocity that increases") {
  // v = 1 - rho + 0.9 rho^2 - 0.9 rho^3 ... pick v' > 0 somewhere: v = (1 - rho)(1 + 2 rho)
  //   = 1 + rho - 2 rho^2, v'(0) = 1.
  const auto m = VelocityModel::custom({1.0, 1.0, -2.0}, 1.0, 0.5);
  const auto v = validate_model(m);
  CHECK_FALSE(v.pass);
  CHECK(v.max_derivative == doctest::Approx(1.0));
  CHECK(v.argmax_rho == doctest::Approx(0.0));
}

TEST_CASE("validate_model rejects v(rho_jam) != 0") {
  const auto m = VelocityModel::custom({1.2, -1.0}, 1.0, 1.0);
  const auto v = validate_model(m);
  CHECK_FALSE(v.pass);
  CHECK(v.v_at_jam == doctest::Approx(0.2));
}

TEST_CASE("constructor errors") {
  CHECK_THROWS_AS(VelocityModel(ModelSpec{VelocityKind::greenshields, 0.0, {1.0}, 1.0}), DomainError);
  CHECK_THROWS_AS(VelocityModel(ModelSpec{VelocityKind::greenshields, 1.0, {1.0}, -1.0}), DomainError);
  CHECK(parse_velocity_kind("custom-polynomial") == VelocityKind::custom_polynomial);
  CHECK(to_string(VelocityKind::quadratic) == "quadratic");
}

}  // TEST_SUITE
