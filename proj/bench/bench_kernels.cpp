// Serial reference kernels against their OpenMP variants.
// Argument 0 runs the serial path, 1 the parallel path.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "zetalab/aux_series.hpp"
#include "zetalab/engine.hpp"
#include "zetalab/kernels.hpp"
#include "zetalab/series_spec.hpp"

using namespace zetalab;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

ParamPoint<Real> point(const char* a, const char* b) {
  return {ScalarTraits<Real>::parse(a), ScalarTraits<Real>::parse(b), std::nullopt};
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "omp x" + std::to_string(omp_get_max_threads()));
}

void BM_FillWeights(benchmark::State& state) {
  set_working_precision(256);
  const auto plan = kernels::plan_weights(flatten(spec_Zr({1, 2}, {0, 1, -1}, {2, 1, 4})));
  const auto p = point("0.8", "1.7");
  std::vector<std::vector<Real>> tables;
  for (auto _ : state) {
    kernels::fill_weights(policy_of(state), plan, p, 1000, 4096, tables);
    benchmark::DoNotOptimize(tables.data());
  }
  label(state);
}

void BM_CoupledTerms(benchmark::State& state) {
  set_working_precision(256);
  const auto tab = coupled_tables(CoupledSeriesSpec{Index({2, 1, 2}), true}, point("1.2", "0.9"), 1024);
  std::vector<Real> out;
  for (auto _ : state) {
    kernels::coupled_terms(policy_of(state), tab, 0, 1024, out);
    benchmark::DoNotOptimize(out.data());
  }
  label(state);
}

void BM_EvalDp(benchmark::State& state) {
  set_working_precision(256);
  const auto spec = spec_Z_I(Index({1, 1, 2}));
  const auto p = point("0.8", "1.7");
  EvalOptions opts;
  opts.policy = policy_of(state);
  for (auto _ : state) {
    auto r = eval_dp(spec, p, opts);
    benchmark::DoNotOptimize(r.value);
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_FillWeights)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoupledTerms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalDp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
