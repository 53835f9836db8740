#include "zetamoments/local_models.hpp"
#include "zetamoments/quadrature.hpp"
#include "zetamoments/zeros.hpp"
#include "zetamoments/zeta_eval.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

void BM_RiemannSiegel(benchmark::State& state) {
  const long double t = std::pow(10.0L, static_cast<long double>(state.range(0)));
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-3;
    benchmark::DoNotOptimize(zm::zeta::riemann_siegel_z(t, x, 2));
  }
}
BENCHMARK(BM_RiemannSiegel)->DenseRange(4, 10, 2);

void BM_EulerMaclaurin(benchmark::State& state) {
  const long double t = std::pow(10.0L, static_cast<long double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(zm::zeta::hardy_z_euler_maclaurin(t));
}
BENCHMARK(BM_EulerMaclaurin)->DenseRange(2, 4, 1);

void BM_Romberg(benchmark::State& state) {
  const double target = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(zm::romberg([](double x) { return std::exp(std::sin(3 * x)); }, 0.0, 2.0, target));
  }
}
BENCHMARK(BM_Romberg)->Arg(6)->Arg(10)->Arg(13);

// zeros isolated once; the timed loop is the HP ratio over a 2m window
const zm::ZeroList& window_zeros() {
  static const zm::ZeroList z = zm::isolate_zeros(100000.0L, 102000.0L);
  return z;
}

void BM_HadamardRatio(benchmark::State& state) {
  const auto& z = window_zeros();
  const std::size_t n = z.size() / 2;
  const zm::local::HadamardWindow win(z, n, static_cast<int>(state.range(0)));
  const double gap = z.offsets[n + 1] - z.offsets[n];
  double x = 0.0;
  for (auto _ : state) {
    x = x < 0.4 ? x + 1e-3 : -0.4;
    benchmark::DoNotOptimize(win.ratio_at(x * gap));
  }
}
BENCHMARK(BM_HadamardRatio)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
