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

#pragma once

// Calibrated parameter sets mirrored by the files in configs/.

#include "afcmem/comb.hpp"
#include "afcmem/memory.hpp"
#include "afcmem/quantumstats.hpp"

#include <vector>

namespace afc::presets {

inline constexpr double kT2 = 1.1e-3;
inline constexpr double kMemoryTm = 13.1e-6;

/// Square teeth, F = 2, 0.5 MHz wide; delta is set per storage time by the sweep.
inline CombSpec storage_comb_template()
{
    CombSpec s;
    s.finesse = 2.0;
    s.d_peak = 1.0;
    s.d0 = 0.0;
    s.bandwidth = 0.5e6;
    s.tooth_shape = ToothShape::Square;
    return s;
}

/// T2-limited optics plus the extra decoherence that brings the efficiency 1/e time to 13.1 us.
inline DecoherenceModel memory_decoherence()
{
    return DecoherenceModel::with_combined_tm(kT2, kMemoryTm);
}

inline std::vector<double> storage_sweep_taus()
{
    std::vector<double> taus;
    for (int i = 1; i <= 10; ++i) {
        taus.push_back(10e-6 * i);
    }
    return taus;
}

/// F = 4 square comb with the background depth chosen so the impedance-matched cavity reaches
/// 15% at 30 us when only T2 limits the storage.
inline constexpr double kCavityD0 = 0.1648;
inline constexpr double kCavityTau = 30e-6;

inline CombSpec cavity_comb()
{
    CombSpec s;
    s.delta = 1.0 / kCavityTau;
    s.finesse = 4.0;
    s.d_peak = 1.0;
    s.d0 = kCavityD0;
    s.bandwidth = 0.5e6;
    s.tooth_shape = ToothShape::Square;
    return s;
}

inline DecoherenceModel cavity_decoherence()
{
    DecoherenceModel d;
    d.t2 = kT2;
    return d;
}

/// Pair source giving g2 = 18 without storage.
inline constexpr double kPairMeanPairs = 0.0607;
inline constexpr double kPairEfficiency = 0.25;
inline constexpr double kPairDarkProb = 1e-5;

inline PairSourceModel pair_source_no_memory()
{
    PairSourceModel m;
    m.mean_pairs_per_window = kPairMeanPairs;
    m.herald_efficiency = kPairEfficiency;
    m.signal_efficiency = kPairEfficiency;
    m.dark_prob_herald = kPairDarkProb;
    m.dark_prob_signal = kPairDarkProb;
    return m;
}

/// The same source after a 0.35% efficient memory that adds background clicks, giving g2 = 4.58.
inline constexpr double kHeraldedStorageEfficiency = 0.0035;
inline constexpr double kMemoryBackground = 1.92e-4;

inline PairSourceModel pair_source_with_memory()
{
    return with_memory(pair_source_no_memory(), kHeraldedStorageEfficiency, kMemoryBackground);
}

} // namespace afc::presets
