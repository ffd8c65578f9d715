#include <benchmark/benchmark.h>

#include "retsurv/distributions.hpp"
#include "retsurv/rng.hpp"

namespace {

using namespace retsurv;

void BM_HazardErlang(benchmark::State& state) {
    const HazardModel model = Erlang{3, 2.0};
    double w = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hazard(model, w));
        w += 1e-6;
    }
}
BENCHMARK(BM_HazardErlang);

void BM_SampleInterarrivalErlang(benchmark::State& state) {
    const HazardModel model = Erlang{3, 2.0};
    PathStream stream(42, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sample_interarrival(model, 0.5, stream.next_uniform()));
}
BENCHMARK(BM_SampleInterarrivalErlang);

void BM_ClaimQuantileGamma(benchmark::State& state) {
    const ClaimDistribution claims = GammaClaim{2.0, 0.5};
    PathStream stream(42, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(claim_sample(claims, stream.next_uniform()));
}
BENCHMARK(BM_ClaimQuantileGamma);

void BM_PathStream(benchmark::State& state) {
    PathStream stream(42, 7);
    for (auto _ : state) benchmark::DoNotOptimize(stream.next_uniform());
}
BENCHMARK(BM_PathStream);

}  // namespace
