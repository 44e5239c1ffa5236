#include <benchmark/benchmark.h>

#include "seqlearn/extrapolation.hpp"
#include "seqlearn/forecasting.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/registry.hpp"
#include "seqlearn/stream.hpp"

using namespace seqlearn;

static void BM_ErrorScan(benchmark::State& state) {
    const std::uint64_t horizon = std::uint64_t{1} << static_cast<unsigned>(state.range(0));
    Extrapolator m = last_bit();
    for (auto _ : state) {
        BitStream sigma = alternating_stream();
        benchmark::DoNotOptimize(error_positions(m, sigma, horizon).size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * horizon));
}
BENCHMARK(BM_ErrorScan)->Arg(12)->Arg(14)->Arg(16);

static void BM_CoarseScan(benchmark::State& state) {
    const std::uint64_t horizon = std::uint64_t{1} << 16;
    Extrapolator m = last_bit();
    for (auto _ : state) {
        BitStream sigma = coarse_block_double(alternating_stream());
        benchmark::DoNotOptimize(error_positions(m, sigma, horizon).size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * horizon));
}
BENCHMARK(BM_CoarseScan);

static void BM_LaplaceSample(benchmark::State& state) {
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    ConditionalLaw law = laplace_bayes();
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(law, seed++, n).size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_LaplaceSample)->Arg(1024)->Arg(4096);

static void BM_GapTrajectory(benchmark::State& state) {
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lambda = bernoulli(Rational(1, 2));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        BitString path = sample(lambda, seed++, n);
        benchmark::DoNotOptimize(
            gap_trajectory(mu, lambda, path, Rational(1, 20)).gaps.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_GapTrajectory)->Arg(1024)->Arg(4096);

static void BM_MergeDepth(benchmark::State& state) {
    const std::uint64_t d = static_cast<std::uint64_t>(state.range(0));
    ConditionalLaw mu = laplace_bayes();
    ConditionalLaw lambda = bernoulli(Rational(2, 3));
    BitString prefix = BitString::from_string("1101");
    for (auto _ : state) {
        benchmark::DoNotOptimize(merge_depth(mu, lambda, prefix, d));
    }
}
BENCHMARK(BM_MergeDepth)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
