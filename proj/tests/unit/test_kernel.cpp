#include <doctest.h>

#include <cmath>
#include <random>

#include "nltraffic/errors.hpp"
#include "nltraffic/kernel.hpp"
#include "oracles.hpp"

using namespace nltraffic;

namespace {

DensityField step_field(double rho_l, double rho_r, double x_jump, double x0, double dx, std::size_t n) {
  DensityField f;
  f.x0 = x0;
  f.dx = dx;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = f.edge(i) < x_jump ? rho_l : rho_r;
  return f;
}

double sine(double x) { return 0.5 + 0.3 * std::sin(x); }

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("constant field averages to itself") {
  DensityField f{0.0, 0.01, std::vector<double>(300, 0.4)};
  for (double eps : {1e-3, 0.05, 3.0, 1e4}) {
    const auto q = exp_average(f, eps);
    for (double v : q.edges) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
  }
  f.boundary = Boundary::periodic;
  for (double v : exp_average(f, 0.2).edges) CHECK(v == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("closed-form step value at x0 - eps") {
  const double eps = 0.05, dx = 1e-3;
  // Jump on a cell edge, 50 cells upstream of it is exactly x0 - eps.
  const auto f = step_field(0.3, 0.7, 0.0, -1.0, dx, 2000);
  const auto q = exp_average(f, eps);
  const std::size_t i = 950;  // edge at -0.05
  CHECK(f.edge(i) == doctest::Approx(-eps).epsilon(1e-14));
  CHECK(std::abs(q.edges[i] - 0.44715177646857696) <= 1e-14);
}

TEST_CASE("two cells with dx = eps") {
  DensityField f{0.0, 0.1, {0.25, 0.75}};
  const auto q = exp_average(f, 0.1);
  const double a = std::exp(-1.0);
  CHECK(q.edges[1] == 0.75);
  CHECK(q.edges[0] == doctest::Approx((1 - a) * 0.25 + a * 0.75).epsilon(1e-15));
}

TEST_CASE("recursion matches the direct-sum oracle") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    auto f = oracle::random_field(rng, 400, 1e-3, k % 2 ? Boundary::periodic : Boundary::constant_extension);
    const double eps = 0.004 * (k + 1);
    CHECK(oracle::max_rel(exp_average(f, eps).edges, oracle::direct_sum_q(f, eps)) <= 1e-13);
  }
}

TEST_CASE("huge eps takes the overflow-safe path") {
  std::mt19937_64 rng(3);
  const auto f = oracle::random_field(rng, 64, 1e-3);
  const auto q = exp_average(f, 1e6);
  for (double v : q.edges) {
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(f.values.back()).epsilon(1e-6));
  }
  CHECK_THROWS_AS(exp_average(f, 0.0), DomainError);
  CHECK_THROWS_AS(exp_average(f, -1.0), DomainError);
}

TEST_CASE("averaging bounds, linearity, monotonicity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int k = 0; k < 20; ++k) {
    auto a = oracle::random_field(rng, 200, 1e-2);
    auto b = a;
    for (auto& v : b.values) v = u(rng);
    const double eps = 0.03;
    const auto qa = exp_average(a, eps), qb = exp_average(b, eps);
    const double lo = *std::min_element(a.values.begin(), a.values.end());
    const double hi = *std::max_element(a.values.begin(), a.values.end());
    for (double v : qa.edges) {
      CHECK(v >= lo);
      CHECK(v <= hi);
    }
    auto lin = a;
    for (std::size_t i = 0; i < a.size(); ++i) lin.values[i] = 0.3 * a.values[i] + 0.6 * b.values[i];
    const auto ql = exp_average(lin, eps);
    for (std::size_t i = 0; i < ql.edges.size(); ++i)
      CHECK(ql.edges[i] == doctest::Approx(0.3 * qa.edges[i] + 0.6 * qb.edges[i]).epsilon(1e-14));
    auto up = a;
    for (std::size_t i = 0; i < a.size(); ++i) up.values[i] = a.values[i] + b.values[i];
    const auto qu = exp_average(up, eps);
    for (std::size_t i = 0; i < qu.edges.size(); ++i) CHECK(qu.edges[i] >= qa.edges[i]);
  }
}

TEST_CASE("q at centers is the exact kernel value") {
  std::mt19937_64 rng(5);
  const auto f = oracle::random_field(rng, 100, 1e-2);
  const double eps = 0.05;
  const auto qc = q_at_centers(f, exp_average(f, eps));
  auto half = f;  // the same density resolved on half cells
  half.dx = f.dx / 2;
  half.values.clear();
  for (double v : f.values) {
    half.values.push_back(v);
    half.values.push_back(v);
  }
  const auto qh = oracle::direct_sum_q(half, eps);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(qc[i] == doctest::Approx(qh[2 * i + 1]).epsilon(1e-13));
}

TEST_CASE("ode identity: constant field") {
  DensityField f{0.0, 0.01, std::vector<double>(100, 0.6)};
  const auto r = check_ode_identity(f, exp_average(f, 0.1));
  CHECK(r.max_abs <= 1e-14);
}

TEST_CASE("ode identity: first order on smooth periodic data") {
  auto coarse = oracle::sampled(0.0, 2 * M_PI, 800, sine, Boundary::periodic);
  auto fine = oracle::sampled(0.0, 2 * M_PI, 1600, sine, Boundary::periodic);
  const double eps = 0.05;
  const double rc = check_ode_identity(coarse, exp_average(coarse, eps)).max_abs;
  const double rf = check_ode_identity(fine, exp_average(fine, eps)).max_abs;
  CHECK(rc / rf >= 1.7);
  CHECK(rc / rf <= 2.3);
}

TEST_CASE("ode identity: step concentrates the residual at the jump") {
  const double eps = 0.01, dx = 1e-3;
  const auto f = step_field(0.2, 0.8, 0.0, -1.0, dx, 2000);
  const auto r = check_ode_identity(f, exp_average(f, eps));
  const std::size_t jump = 999;  // last cell before the jump
  CHECK((r.argmax == jump || r.argmax == jump + 1));
  for (std::size_t i = jump + 1; i < f.size(); ++i) CHECK(std::abs(r.residual[i]) <= 1e-13);
  // Upstream the residual is the kernel tail exp(-d/eps), below roundoff past ~35 eps.
  for (std::size_t i = 0; f.center(i) < -35 * eps; ++i) CHECK(std::abs(r.residual[i]) <= 1e-13);
}

TEST_CASE("ode identity: grid mismatch is a usage error") {
  DensityField a{0.0, 0.01, std::vector<double>(10, 0.5)};
  DensityField b{0.0, 0.02, std::vector<double>(10, 0.5)};
  CHECK_THROWS_AS(check_ode_identity(a, exp_average(b, 0.1)), UsageError);
}

}  // TEST_SUITE
