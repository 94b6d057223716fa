#include "tailcert/adversary.hpp"
#include "tailcert/montecarlo.hpp"
#include "tailcert/oracle.hpp"
#include "tailcert/rng.hpp"

#include <benchmark/benchmark.h>

using namespace tailcert;

static void BM_BinomTailExact(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const BigRational p(1, 16);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::binom_tail(n, p, static_cast<std::int64_t>(n / 8), oracle::Mode::exact));
}
BENCHMARK(BM_BinomTailExact)->RangeMultiplier(4)->Range(64, 4096);

static void BM_BinomTailFloat(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const BigRational p(1, 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::binom_tail(n, p, static_cast<std::int64_t>(n / 8), oracle::Mode::float_log));
    }
}
BENCHMARK(BM_BinomTailFloat)->RangeMultiplier(8)->Range(64, 1 << 18);

static void BM_PrefixMaxDp(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const auto m = static_cast<std::int64_t>(state.range(0) / 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::prefix_max_tail(n, m, oracle::PrefixMaxMethod::dp, oracle::Mode::exact));
    }
}
BENCHMARK(BM_PrefixMaxDp)->RangeMultiplier(2)->Range(64, 512);

static void BM_HittingMeanExact(benchmark::State& state) {
    const auto r = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oracle::hitting_time_mean_exact({r, std::nullopt}));
}
BENCHMARK(BM_HittingMeanExact)->Arg(8)->Arg(32);

static void BM_Philox(benchmark::State& state) {
    CounterRng rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

static void BM_PlayGame(benchmark::State& state) {
    const Fraction v(static_cast<std::int64_t>(state.range(0)));
    const auto strategy = adversary::make_strategy("burst:4", v);
    adversary::GameConfig cfg;
    cfg.v = v;
    cfg.n = adversary::natural_length(*strategy, v);
    adversary::Trajectory traj;
    std::uint64_t trial = 0;
    for (auto _ : state) {
        CounterRng rng(0, trial++);
        adversary::play(cfg, *strategy, rng, traj);
        benchmark::DoNotOptimize(traj.y_max);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n));
}
BENCHMARK(BM_PlayGame)->Arg(4)->Arg(64);

static void BM_EstimateFairTail(benchmark::State& state) {
    const montecarlo::IidSubject subject{256, oracle::FairWalk{}};
    for (auto _ : state) benchmark::DoNotOptimize(montecarlo::estimate_tail(subject, 16, 100000, 0));
}
BENCHMARK(BM_EstimateFairTail)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
