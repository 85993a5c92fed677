// Copyright 2026 The afcmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "afcmem/comb.hpp"
#include "afcmem/fft.hpp"
#include "afcmem/memory.hpp"
#include "afcmem/quantumstats.hpp"
#include "afcmem/repeater.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_Fft(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<afc::cplx> data(n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (auto &x : data) {
        x = {g(rng), g(rng)};
    }
    for (auto _ : state) {
        afc::fft_inplace(data, afc::FftDirection::Forward);
        afc::fft_inplace(data, afc::FftDirection::Inverse);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n) * 2);
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);

void BM_StoreAndRecall(benchmark::State &state)
{
    const afc::TimeGrid grid(static_cast<std::size_t>(state.range(0)), 4e-9);
    const auto in = afc::gaussian_pulse(grid, 10e-6, 1e-6, 0.0, 1.0);
    afc::CombSpec spec;
    spec.bandwidth = 2e6;
    const auto dec = afc::DecoherenceModel::with_combined_tm(1.1e-3, 13.1e-6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(afc::store_and_recall(in, spec, dec).efficiency);
    }
}
BENCHMARK(BM_StoreAndRecall)->Arg(1 << 15)->Arg(1 << 16)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

void BM_AtomicKernel(benchmark::State &state)
{
    const afc::TimeGrid grid(1 << 15, 4e-9);
    afc::CombSpec spec;
    spec.bandwidth = 2e6;
    const auto profile = afc::build_profile(spec, grid.df(), grid.size());
    const auto atoms = afc::sample_atoms(profile, static_cast<std::size_t>(state.range(0)), 1,
                                         afc::SamplingScheme::Stratified);
    for (auto _ : state) {
        benchmark::DoNotOptimize(afc::atomic_kernel(atoms, afc::integrated_depth(profile), grid).data());
    }
}
BENCHMARK(BM_AtomicKernel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_G2MonteCarlo(benchmark::State &state)
{
    afc::PairSourceModel m;
    m.mean_pairs_per_window = 0.0607;
    for (auto _ : state) {
        benchmark::DoNotOptimize(afc::simulate_counts(m, state.range(0), 7).coincidences);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_G2MonteCarlo)->Arg(1 << 20)->Arg(1 << 23)->Unit(benchmark::kMillisecond);

void BM_SpinwaveSchedule(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<afc::QubitTrain> trains;
    std::vector<afc::ControlPulse> pulses;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * 7e-6;
        trains.push_back({"T" + std::to_string(i), t, 5, 1e-6, afc::TrainState::Optical});
        pulses.push_back({t + 6e-6, afc::PulseDirection::Down, std::nullopt});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(afc::simulate_spinwave_schedule(trains, pulses, 10e-6).conflicts.size());
    }
}
BENCHMARK(BM_SpinwaveSchedule)->Arg(16)->Arg(256)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
