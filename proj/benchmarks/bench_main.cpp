// Micro-benchmarks for the hot paths: potential evaluation, map iteration,
// chart construction, weighted inner products, and the periodic-orbit solver.
//
//   ./benchmarks/suris_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "suris/action_angle.hpp"
#include "suris/deformed_basis.hpp"
#include "suris/invariant_geometry.hpp"
#include "suris/map_dynamics.hpp"
#include "suris/orbit_solver.hpp"
#include "suris/potentials.hpp"

namespace {

using namespace suris;

SurisParams canonical(double eps) {
  const double n = std::sqrt(0.86);
  return SurisParams(eps * 0.6 / n, eps * -0.3 / n, eps * 0.5 / n,
                     eps * 0.4 / n);
}

void BM_vprime(benchmark::State& state) {
  const SurisParams p = canonical(0.05);
  double x = 0.1234;
  for (auto _ : state) {
    benchmark::DoNotOptimize(suris_vprime(p, x));
    x += 0.001;
  }
}
BENCHMARK(BM_vprime);

void BM_step(benchmark::State& state) {
  const Potential v = Potential::suris(canonical(0.05));
  PhasePoint z{0.1, 0.23};
  for (auto _ : state) {
    z = step(v, z);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_step);

void BM_first_integral(benchmark::State& state) {
  const SurisParams p = canonical(0.05);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_integral(p, {x, 0.3}));
    x += 0.001;
  }
}
BENCHMARK(BM_first_integral);

void BM_curve_build(benchmark::State& state) {
  const SurisParams p = canonical(0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(InvariantCurve(p, {0.2, +1, 0},
                                            static_cast<int>(state.range(0))));
}
BENCHMARK(BM_curve_build)->Arg(512)->Arg(2048);

void BM_chart_build(benchmark::State& state) {
  const SurisParams p = canonical(0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_chart(p, 0.27,
                                         static_cast<int>(state.range(0))));
}
BENCHMARK(BM_chart_build)->Arg(512)->Arg(2048);

void BM_inner_product(benchmark::State& state) {
  const InnerProductContext ctx(canonical(0.02),
                                static_cast<int>(state.range(0)));
  const ComplexVector f = basis_vector(ctx, 5).values;
  const ComplexVector g = basis_vector(ctx, 1).values;
  for (auto _ : state) benchmark::DoNotOptimize(inner_product(ctx, f, g));
}
BENCHMARK(BM_inner_product)->Arg(512)->Arg(2048);

void BM_minimize_action_free(benchmark::State& state) {
  const Potential v = Potential::suris(canonical(0.05));
  const long q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_action(v, 1, q));
}
BENCHMARK(BM_minimize_action_free)->Arg(5)->Arg(12)->Arg(48);

void BM_beta_perturbed(benchmark::State& state) {
  TrigPerturbation t;
  t.cos_coeffs = {1e-3, 5e-4};
  const Potential v =
      Potential::sum(Potential::suris(canonical(0.05)), Potential::trig(t));
  for (auto _ : state) benchmark::DoNotOptimize(beta(v, 2, 7));
}
BENCHMARK(BM_beta_perturbed);

}  // namespace

BENCHMARK_MAIN();
