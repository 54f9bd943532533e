#include <benchmark/benchmark.h>

#include <cmath>

#include "nsgev/distributions.hpp"
#include "nsgev/fitters.hpp"
#include "nsgev/lmoments.hpp"
#include "nsgev/regression.hpp"
#include "nsgev/returns.hpp"
#include "nsgev/rng.hpp"

using namespace nsgev;

namespace {

AnnualSeries gev11_series(std::size_t n) {
  CounterRng rng(1, 2);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = gev_draw(rng, {-0.1 * (i + 1.0), std::exp(1 + 0.02 * (i + 1.0)), -0.05});
  return AnnualSeries::from_values(z);
}

void BM_SampleLmoments(benchmark::State& state) {
  const auto x = gev_rand(static_cast<std::size_t>(state.range(0)), {0, 1, 0.1}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_lmoments(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleLmoments)->RangeMultiplier(10)->Range(50, 50000)->Complexity();

void BM_MmRegression(benchmark::State& state) {
  const auto s = gev11_series(static_cast<std::size_t>(state.range(0)));
  const auto X = DesignMatrix::with_intercept(s.size(), {{"t", s.time_index()}});
  for (auto _ : state) benchmark::DoNotOptimize(mm_robust_fit(X, s.values()));
}
BENCHMARK(BM_MmRegression)->Arg(50)->Arg(500);

template <Method M>
void BM_Fit(benchmark::State& state) {
  const auto s = gev11_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit(M, s, ModelSpec::gev11()));
}
BENCHMARK(BM_Fit<Method::prop>)->Arg(50)->Arg(200);
BENCHMARK(BM_Fit<Method::gn16>)->Arg(50)->Arg(200);
BENCHMARK(BM_Fit<Method::wls>)->Arg(50)->Arg(200);
BENCHMARK(BM_Fit<Method::mle>)->Arg(50)->Arg(200);

void BM_PareyRl(benchmark::State& state) {
  const NsGevParams p{{0, -0.1}, {1, 0.02}, -0.05, 0};
  for (auto _ : state) benchmark::DoNotOptimize(parey_rl(p, ModelSpec::gev11(), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PareyRl)->Arg(50)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
