#include <benchmark/benchmark.h>

#include "retsurv/model.hpp"
#include "retsurv/simulator.hpp"

namespace {

using namespace retsurv;

ModelParams reference_model() {
    ModelParams m;
    m.p = 1.5;
    m.eta = 0.1;
    m.T = 5.0;
    m.hazard = ConstantRate{1.0};
    m.claims = ExponentialClaim{1.0};
    return m;
}

void BM_PathConstantPolicy(benchmark::State& state) {
    const ModelParams m = reference_model();
    const Policy policy = ConstantPolicy{1.0};
    std::uint64_t n = 0;
    for (auto _ : state) {
        RandomEventSource source(m, 42, n++);
        benchmark::DoNotOptimize(
            simulate_path(m, policy, State{0.0, 0.5, 0.0}, source, m.T));
    }
}
BENCHMARK(BM_PathConstantPolicy);

void BM_SurvivalEstimate(benchmark::State& state) {
    const ModelParams m = reference_model();
    const Policy policy = ConstantPolicy{0.5};
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_survival(
            m, policy, State{0.0, 0.5, 0.0},
            static_cast<std::uint64_t>(state.range(0)), 42));
}
BENCHMARK(BM_SurvivalEstimate)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

}  // namespace
