#include <benchmark/benchmark.h>

#include "retsurv/hjb.hpp"
#include "retsurv/model.hpp"

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

void BM_SolveSmall(benchmark::State& state) {
    const ModelParams m = reference_model();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve(m, n, n));
}
BENCHMARK(BM_SolveSmall)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_JumpValue(benchmark::State& state) {
    const ClaimDistribution claims = ExponentialClaim{1.0};
    std::vector<double> row(201);
    for (int j = 0; j <= 200; ++j) row[j] = 0.2 + 0.003 * j;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            jump_value(claims, row, 0.75 / 200.0, 0.4, 0.65, 64));
}
BENCHMARK(BM_JumpValue);

}  // namespace
