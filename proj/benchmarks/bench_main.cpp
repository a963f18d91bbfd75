#include <benchmark/benchmark.h>

#include "invdiff/distance.hpp"
#include "invdiff/fuzzer.hpp"
#include "invdiff/kde.hpp"
#include "invdiff/miner.hpp"
#include "invdiff/numeric.hpp"

using namespace invdiff;

namespace {

TraceSet synthetic_trace(std::size_t n_vars, std::size_t n_rows, std::uint64_t seed) {
    Rng rng(seed);
    TraceSet t;
    t.breakpoint_id = "bp";
    t.input_id = "i";
    for (std::size_t r = 0; r < n_rows; ++r) {
        TraceRow row;
        row.round_index = static_cast<int>(r);
        for (std::size_t v = 0; v < n_vars; ++v) {
            row.snapshots.push_back(
                {"v" + std::to_string(v),
                 static_cast<double>(static_cast<std::int64_t>(rng.below(2001)) - 1000)});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void MineInvariants(benchmark::State& state) {
    const TraceSet t = synthetic_trace(static_cast<std::size_t>(state.range(0)),
                                       static_cast<std::size_t>(state.range(1)), 42);
    for (auto _ : state) {
        auto set = mine_invariants(t);
        benchmark::DoNotOptimize(set);
    }
}
BENCHMARK(MineInvariants)->Args({4, 100})->Args({10, 1500})->Args({10, 20000});

void DistanceVectorBench(benchmark::State& state) {
    Rng rng(7);
    InvariantSet u, v;
    u.breakpoint_id = v.breakpoint_id = "bp";
    u.input_id = v.input_id = "i";
    for (int i = 0; i < state.range(0); ++i) {
        u.invariants.insert("e" + std::to_string(rng.below(100000)));
        v.invariants.insert("e" + std::to_string(rng.below(100000)));
    }
    for (auto _ : state) {
        auto d = distance_vector(u, v);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(DistanceVectorBench)->Arg(64)->Arg(1024)->Arg(16384);

void EstimateDensity(benchmark::State& state) {
    Rng rng(11);
    std::vector<double> values;
    for (int i = 0; i < state.range(0); ++i) values.push_back(rng.unit());
    for (auto _ : state) {
        auto est = estimate_density(values);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(EstimateDensity)->Arg(16)->Arg(256)->Arg(1500);

void SampleTraces(benchmark::State& state) {
    const TraceSet t = synthetic_trace(4, 20000, 3);
    for (auto _ : state) {
        auto sampled = sample_traces(t, 1500, 9);
        benchmark::DoNotOptimize(sampled);
    }
}
BENCHMARK(SampleTraces);

void FuzzCampaignBench(benchmark::State& state) {
    const auto& subject = subject_by_name("bubble_sort");
    for (auto _ : state) {
        auto corpus = fuzz_campaign(subject, kVersionBuggy,
                                    static_cast<std::uint64_t>(state.range(0)), 1);
        benchmark::DoNotOptimize(corpus);
    }
}
BENCHMARK(FuzzCampaignBench)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
