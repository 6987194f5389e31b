#include <benchmark/benchmark.h>

#include <cmath>

#include "slicecount/fourier.hpp"
#include "slicecount/lattice_slice.hpp"
#include "slicecount/paraboloid_landau.hpp"
#include "slicecount/specfun.hpp"

namespace sc = slicecount;

namespace {

void BM_SliceVolume2D(benchmark::State& state) {
  const sc::SliceConfig cfg(2, 2);
  const sc::TorusOffset off({0.31, 0.77});
  const auto rho = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sc::slice_volume(cfg, off, rho));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SliceVolume2D)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNSquared);

void BM_SliceVolume3D(benchmark::State& state) {
  const sc::SliceConfig cfg(4, 3);
  const sc::TorusOffset off({0.31, 0.77, 0.12});
  const auto rho = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sc::slice_volume(cfg, off, rho));
}
BENCHMARK(BM_SliceVolume3D)->RangeMultiplier(4)->Range(16, 256);

void BM_BesselInteger(benchmark::State& state) {
  const auto nu = sc::HalfInteger::from_int(static_cast<int>(state.range(0)));
  double z = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc::bessel_j(nu, z));
    z = z < 200.0 ? z + 0.731 : 0.5;
  }
}
BENCHMARK(BM_BesselInteger)->Arg(0)->Arg(1)->Arg(2)->Arg(8);

void BM_BesselHalfOdd(benchmark::State& state) {
  const auto nu = sc::HalfInteger::from_twice(static_cast<int>(state.range(0)));
  double z = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc::bessel_j(nu, z));
    z = z < 200.0 ? z + 0.731 : 0.5;
  }
}
BENCHMARK(BM_BesselHalfOdd)->Arg(1)->Arg(3)->Arg(7);

void BM_ChiHat(benchmark::State& state) {
  const sc::SliceConfig cfg(3, 2);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc::chi_hat(cfg, t));
    t = t < 500.0 ? t + 1.37 : 0.1;
  }
}
BENCHMARK(BM_ChiHat);

void BM_PoissonSum(benchmark::State& state) {
  const sc::SliceConfig cfg(2, 2);
  const sc::TorusOffset off({0.31, 0.77});
  const auto rho = static_cast<double>(state.range(0));
  const double eps = sc::default_epsilon(cfg, rho);
  const auto trunc = sc::make_poisson_truncation(cfg, rho, eps, sc::Sign::none);
  for (auto _ : state) benchmark::DoNotOptimize(sc::poisson_sum_approx(cfg, off, rho, eps, trunc, sc::Sign::none));
}
BENCHMARK(BM_PoissonSum)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ParaboloidMeasure(benchmark::State& state) {
  const sc::ParaboloidQuery q(3, 1, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sc::paraboloid_measure(q));
}
BENCHMARK(BM_ParaboloidMeasure)->RangeMultiplier(10)->Range(1000, 1000000);

}  // namespace

BENCHMARK_MAIN();
