#include <benchmark/benchmark.h>

#include <cmath>

#include "lclab/criterion.hpp"
#include "lclab/verifier.hpp"

using namespace lclab;

namespace {
const QuadratureSpec kSpec;
}

static void BM_ScaledLnMeanClosed(benchmark::State& state) {
  auto f = RadialProfile::cutoff_power_tail(std::exp(0.5), 1.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaled_ln_mean(f, 7.3, 2.0, kSpec));
  }
}
BENCHMARK(BM_ScaledLnMeanClosed);

static void BM_ScaledLnMeanAdaptive(benchmark::State& state) {
  auto f = RadialProfile::cutoff_power_tail(std::exp(0.5), 1.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaled_ln_mean(f, 7.3, 2.0, kSpec, true));
  }
}
BENCHMARK(BM_ScaledLnMeanAdaptive);

static void BM_OuterIntegralPower(benchmark::State& state) {
  auto g = make_custom_group(2.0, 3.0);
  RadialIntegrand h({{RadialProfile::cutoff_power_tail(1.0, 1.0, 5.0), 1.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(outer_integral(h, g, 0.0, kSpec).value.log());
  }
}
BENCHMARK(BM_OuterIntegralPower);

static void BM_OuterIntegralExpDecay(benchmark::State& state) {
  auto g = make_custom_group(2.0, 3.0);
  RadialIntegrand h({{RadialProfile::exp_power(-0.5, 1.3), 1.0},
                     {RadialProfile::power_law(0.7), 1.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(outer_integral(h, g, 0.0, kSpec).value.log());
  }
}
BENCHMARK(BM_OuterIntegralExpDecay);

static void BM_CriterionPowerWeights(benchmark::State& state) {
  auto g = make_custom_group(2.0, 3.0);
  InequalityParams params;
  params.beta = 1.3;
  params.alpha = g.Q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        A_alpha(WeightSpec::ball_power(0.5), WeightSpec::ball_power(0.5), params, g,
                kSpec)
            .A_value);
  }
}
BENCHMARK(BM_CriterionPowerWeights);

static void BM_ConstantBounds(benchmark::State& state) {
  auto g = make_euclidean_group(1);
  InequalityParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        constant_bounds(WeightSpec::one(), WeightSpec::one(), params, g, kSpec).upper);
  }
}
BENCHMARK(BM_ConstantBounds);

static void BM_ProbeRatio(benchmark::State& state) {
  auto g = make_euclidean_group(1);
  const std::vector<double> gamma = {1.0 + std::exp2(-static_cast<int>(state.range(0)))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sharpness_probe_power(0.0, 1.0, g, gamma, kSpec).points[0].ratio_numeric);
  }
}
BENCHMARK(BM_ProbeRatio)->Arg(0)->Arg(5)->Arg(10);

static void BM_InequalityRatioGenericMean(benchmark::State& state) {
  auto g = make_custom_group(1.5, 2.0);
  InequalityParams params;
  params.beta = 1.2;
  auto f = RadialProfile::cutoff_power_tail(1.0, 1.0, 4.0) *
           RadialProfile::exp_power(-0.2, 1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inequality_ratio(f, WeightSpec::one(), WeightSpec::one(),
                                              params, g, kSpec));
  }
}
BENCHMARK(BM_InequalityRatioGenericMean);

BENCHMARK_MAIN();
