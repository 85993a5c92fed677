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
#include "afcmem/decay_fit.hpp"
#include "afcmem/signals.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace afc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Phenomenological decoherence. Efficiency after storage time tau decays as
/// exp(-4 tau / t2) * exp(-tau / tm_extra), i.e. with 1/e time T_m where 1/T_m = 4/t2 + 1/tm_extra.
struct DecoherenceModel {
    double t2 = kInfinity;
    double tm_extra = kInfinity;
    /// Radiative lifetime, bookkeeping only.
    double t1 = kInfinity;

    static DecoherenceModel none() { return {}; }
    /// Chooses tm_extra so that the combined 1/e efficiency time equals tm.
    static DecoherenceModel with_combined_tm(double t2, double tm, double t1 = kInfinity);

    double combined_tm() const;
    double efficiency_decay(double tau) const;
    bool enabled() const { return std::isfinite(combined_tm()); }
    void validate() const;
};

struct StorageOptions {
    PhaseMode phase = PhaseMode::MinimalPhase;
    double out_of_band_depth = 0.0;
    /// Fraction of input spectral energy that must lie inside the comb bandwidth.
    double min_in_band_fraction = 0.95;
    int max_echo_order = 3;
};

struct StorageResult {
    ComplexEnvelope output;
    double input_energy = 0.0;
    double input_time = 0.0;
    double transmitted_energy = 0.0;
    double echo_energy = 0.0;
    /// Absolute energy-weighted centroid of the first echo window.
    double echo_time = 0.0;
    /// echo_time - input_time.
    double echo_delay = 0.0;
    double efficiency = 0.0;
    /// Energies of echoes of order 2, 3, ... that fit on the grid; not part of efficiency.
    std::vector<double> higher_order_echo_energies;
};

/// Multiplies the envelope spectrum by the transfer function.
ComplexEnvelope propagate(const ComplexEnvelope &input, const TransferFunction &tf);

/// Scales the medium impulse response around each echo order n >= 1 (t within tau/2 of n tau)
/// by the amplitude factor sqrt(efficiency_decay(n tau)). The direct (n = 0) part is untouched.
TransferFunction apply_decoherence(const TransferFunction &tf, double tau, const DecoherenceModel &dec);

/// Window bookkeeping for a finished propagation: transmitted window [t_in - 2w, t_in + 2w],
/// echo window [t_in + tau - 2w, t_in + tau + 2w], w = input intensity FWHM.
StorageResult analyze_storage(const ComplexEnvelope &input, ComplexEnvelope output, double tau,
                              int max_echo_order = 3);

/// Full absorb / rephase / re-emit simulation through the comb described by spec.
/// Rejects inputs whose spectrum leaves the comb bandwidth and echoes that leave the grid.
StorageResult store_and_recall(const ComplexEnvelope &input, const CombSpec &spec, const DecoherenceModel &dec,
                               const StorageOptions &opts = {});

struct SweepOptions {
    TimeGrid grid{std::size_t{1} << 20, 10e-9};
    double pulse_fwhm = 2e-6;
    double pulse_center = 10e-6;
    StorageOptions storage{};
    unsigned threads = 1;
};

struct SweepPoint {
    double tau = 0.0;
    double efficiency = 0.0;
    double echo_delay = 0.0;
};

/// One store_and_recall per tau with delta = 1/tau and the template's other fields fixed.
/// Results are ordered as taus and do not depend on the thread count.
std::vector<SweepPoint> efficiency_sweep(const std::vector<double> &taus, const CombSpec &comb_template,
                                         const DecoherenceModel &dec, const SweepOptions &opts = {});

std::vector<DecayPoint> to_decay_points(const std::vector<SweepPoint> &sweep);

/// Impedance-matched cavity projection.
///
/// At matching the cavity absorbs the intracavity field completely at the comb teeth. With
/// d_tilde = (d_peak - d0) / F the comb's mean per-pass absorption, the impedance factor is
/// F_imp = 1 / d_tilde, and
///   cavity = exp(-2 d0 F_imp) * dephasing(shape, F) * decay(tau),
///   single_pass = analytic_efficiency(spec) * decay(tau).
struct CavityProjection {
    double cavity = 0.0;
    double single_pass = 0.0;
    double impedance_factor = 0.0;
};

CavityProjection cavity_enhanced_projection(const CombSpec &spec, const DecoherenceModel &dec, double tau);

} // namespace afc
