#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nltraffic/entropy_audit.hpp"
#include "nltraffic/kernel.hpp"
#include "nltraffic/local_solver.hpp"
#include "nltraffic/nonlocal_solver.hpp"

using namespace nltraffic;

namespace {

DensityField sine_field(std::size_t n) {
  DensityField f;
  f.x0 = 0.0;
  f.dx = 2.0 * std::numbers::pi / static_cast<double>(n);
  f.boundary = Boundary::periodic;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = 0.5 + 0.3 * std::sin(f.center(i));
  return f;
}

}  // namespace

static void BM_ExpAverage(benchmark::State& state) {
  const auto f = sine_field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exp_average(f, 0.05));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExpAverage)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oN);

static void BM_StepNonlocal(benchmark::State& state) {
  const auto m = VelocityModel::greenshields();
  const auto s = make_nonlocal_state(sine_field(static_cast<std::size_t>(state.range(0))), 0.05);
  const double dt = cfl_dt(s, m, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(step_nonlocal(s, m, dt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepNonlocal)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

static void BM_GodunovFlux(benchmark::State& state) {
  const GodunovFlux g(state.range(0) ? VelocityModel::quadratic(0.1, 1.0) : VelocityModel::greenshields());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> rho(4096);
  for (auto& r : rho) r = u(rng);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i) acc += g(rho[i], rho[i + 1]);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rho.size() - 1));
}
BENCHMARK(BM_GodunovFlux)->Arg(0)->Arg(1)->ArgNames({"nonconcave"});

static void BM_GodunovStep(benchmark::State& state) {
  const GodunovFlux g(VelocityModel::greenshields());
  const auto f = sine_field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(godunov_step(f, g, 0.5 * f.dx));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GodunovStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

static void BM_JDecomposition(benchmark::State& state) {
  const auto m = VelocityModel::greenshields();
  const auto s = make_nonlocal_state(sine_field(6400), 0.05);
  const SpatialTestFunction phi{std::numbers::pi, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(j_decomposition(s, m, phi));
}
BENCHMARK(BM_JDecomposition);

BENCHMARK_MAIN();
