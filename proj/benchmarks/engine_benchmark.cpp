// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>

#include "hired/hired.hpp"

namespace {

void BM_SelectTokens(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<float> f(n);
    for (float& v : f) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hired::select_tokens(f, n / 5));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SelectTokens)->Arg(576)->Arg(2304);

void BM_Apportion(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<float> scores(k);
    for (float& v : scores) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hired::apportion(scores, 2304));
    }
}
BENCHMARK(BM_Apportion)->Arg(4)->Arg(16);

void BM_RunHired(benchmark::State& state) {
    const hired::AttentionDump dump = hired::generate_synthetic_dump(1, 4, 16, 576, {0, 11, 22});
    hired::EngineConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hired::run_hired(dump, config));
    }
}
BENCHMARK(BM_RunHired);

void BM_ReadNpy(benchmark::State& state) {
    const hired::AttentionDump dump = hired::generate_synthetic_dump(1, 0, 16, 576, {0, 11, 22});
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / ("hired-bench-" + std::to_string(std::random_device{}()) + ".npy");
    hired::write_npy(dump.partition(0).attention, path);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hired::read_npy(path));
    }
    std::filesystem::remove(path);
}
BENCHMARK(BM_ReadNpy);

}  // namespace

BENCHMARK_MAIN();
