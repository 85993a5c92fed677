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

#include "afcmem/comb.hpp"
#include "afcmem/memory.hpp"
#include "afcmem/signals.hpp"

#include <vector>

namespace afc {

/// Channel j is a copy of base_comb centred at base_comb.center_detuning + j * spacing.
struct ChannelPlan {
    std::size_t n_channels = 11;
    double spacing = 10e6;
    double channel_bandwidth = 1e6;
    CombSpec base_comb{};

    double channel_center(std::size_t j) const;
    CombSpec channel_comb(std::size_t j) const;
    double total_span() const;
    void validate() const;
};

/// Single Lorentzian resonance; amplitude response sqrt(T) / (1 - i 2 delta / fwhm).
struct FilterCavity {
    double fwhm = 7.5e6;
    double resonance_detuning = 0.0;
    double peak_transmission = 1.0;

    cplx amplitude_response(double detuning) const;
    double power_transmission(double detuning) const;
    void validate() const;
};

/// Multiplies samples by exp(i 2 pi shift t). leakage is the fraction of power left unshifted
/// by an imperfect drive (0 for an ideal serrodyne). Rejects |shift| >= Nyquist.
ComplexEnvelope serrodyne(const ComplexEnvelope &env, double shift, double leakage = 0.0);

ComplexEnvelope cavity_filter(const ComplexEnvelope &env, const FilterCavity &cav);

/// Combined optical depth of every channel comb in the plan.
OpticalDepthProfile build_plan_profile(const ChannelPlan &plan, const TimeGrid &grid);

struct FeedforwardRun {
    ChannelPlan plan{};
    std::size_t selected = 0;
    DecoherenceModel decoherence{};
    FilterCavity cavity{};
    /// Input time of each channel's pulse (one per channel).
    std::vector<double> temporal_offsets;
    TimeGrid grid{std::size_t{1} << 18, 1e-9};
    double pulse_fwhm = 1e-6;
    /// Optional per-channel amplitude-squared gain (empty = all 1).
    std::vector<double> channel_gains;
    double serrodyne_leakage = 0.0;
    PhaseMode phase = PhaseMode::MinimalPhase;
};

struct FeedforwardResult {
    /// Detected intensity |E|^2 after the cavity.
    std::vector<double> intensity;
    TimeGrid grid;
    /// Energy in each channel's slot after the memory and serrodyne, before the cavity.
    std::vector<double> slot_energy_before_cavity;
    std::vector<double> slot_energy_after_cavity;
    /// crosstalk_row[j] = slot_energy_after_cavity[j] / slot_energy_before_cavity[j].
    std::vector<double> crosstalk_row;
    /// Slot windows [start, end) used for integration.
    std::vector<std::pair<double, double>> slots;
};

/// Stores one pulse per channel, recalls all, shifts by -selected * spacing and filters.
FeedforwardResult simulate_feedforward_run(const FeedforwardRun &run);

/// Row i of the matrix comes from the run that selects channel i.
std::vector<std::vector<double>> crosstalk_matrix(FeedforwardRun run);

/// Per-channel transmitted and echo energies with the cavity tuned onto each channel in turn
/// (no serrodyne), mirroring a resonance scan over the plan.
struct ChannelScanPoint {
    std::size_t channel;
    double detuning;
    double transmitted_energy;
    double echo_energy;
};
std::vector<ChannelScanPoint> resonance_scan(const FeedforwardRun &run);

/// floor(optical_storage_time / mode_duration) * n_channels.
long long multimode_capacity(double optical_storage_time, double mode_duration, long long n_channels);

} // namespace afc
