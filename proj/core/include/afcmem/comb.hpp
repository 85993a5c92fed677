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

#include "afcmem/signals.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace afc {

enum class ToothShape { Square, Gaussian };

std::string to_string(ToothShape shape);
ToothShape tooth_shape_from_string(const std::string &name);

/// Parametric atomic frequency comb.
///
/// Teeth of width delta/finesse (full width for square teeth, FWHM for gaussian teeth)
/// sit on a background d0 inside [center - bandwidth/2, center + bandwidth/2].
/// d_peak is the absolute optical depth at a tooth, so d_peak == d0 is a flat absorber.
struct CombSpec {
    double delta = 200e3;
    double finesse = 2.0;
    double d_peak = 1.0;
    double d0 = 0.0;
    double bandwidth = 1e6;
    double center_detuning = 0.0;
    ToothShape tooth_shape = ToothShape::Square;

    double tooth_width() const { return delta / finesse; }
    double storage_time() const { return 1.0 / delta; }
    std::size_t n_teeth() const;
    /// Centre frequency of tooth k, k in [0, n_teeth).
    double tooth_center(std::size_t k) const;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Optical depth sampled on a centred spectrum axis: bin m is at (m - n/2) * df.
struct OpticalDepthProfile {
    double df = 0.0;
    std::vector<double> depths;

    double frequency(std::size_t m) const
    {
        return (static_cast<double>(m) - static_cast<double>(depths.size() / 2)) * df;
    }
};

enum class PhaseMode { Flat, MinimalPhase };

struct TransferFunction {
    double df = 0.0;
    std::vector<cplx> t;
};

/// Explicit atoms sampled from an optical-depth profile.
struct AtomEnsembleSample {
    std::vector<double> detunings;
    std::vector<double> weights;
    std::vector<double> positions;

    std::size_t size() const { return detunings.size(); }
};

enum class SamplingScheme { Independent, Stratified };

inline constexpr double kReferenceWavelength = 795.325e-9;
inline constexpr double kCrystalLength = 25e-3;

/// Minimum bins per tooth width accepted by build_profile.
inline constexpr double kMinBinsPerTooth = 8.0;

/// Bin-averaged optical depth of the comb. Each bin holds the mean of the continuous
/// profile over [f - df/2, f + df/2], so tooth edges that fall inside a bin do not alias.
/// Throws std::invalid_argument when a tooth is covered by fewer than kMinBinsPerTooth bins.
OpticalDepthProfile build_profile(const CombSpec &spec, double df, std::size_t n_bins,
                                  double out_of_band_depth = 0.0);

/// Adds a comb's in-band depth on top of an existing profile (used for multi-channel plans).
void add_comb(OpticalDepthProfile &profile, const CombSpec &spec);

/// Amplitude transmission. Flat: exp(-d/2), real. MinimalPhase: same magnitude with the causal
/// (Kramers-Kronig) phase obtained from the folded cepstrum of -d/2.
TransferFunction transfer_function(const OpticalDepthProfile &profile, PhaseMode mode);

/// Causal transmission from an explicit complex absorption kernel kappa(t_k), t_k = k dt,
/// folded already (zero for negative times). Shared by the profile and atomic-sum routes.
TransferFunction transfer_from_kernel(std::vector<cplx> kernel, double df);

/// Dephasing factor of the first echo: sinc^2(pi/F) for square teeth, exp(-7/F^2) for gaussian.
double dephasing_factor(ToothShape shape, double finesse);

/// Closed-form first-echo efficiency, forward recall, no decoherence.
/// With h = d_peak - d0 the tooth height above background:
///   square:   (h/F)^2 sinc^2(pi/F) exp(-h/F) exp(-d0)
///   gaussian: (h/F)^2 exp(-7/F^2)  exp(-h/F) exp(-d0)
double analytic_efficiency(const CombSpec &spec);

/// Draws atoms with detuning density proportional to the profile. Weights are equal
/// (sum of squares 1); positions uniform over the crystal length. Deterministic per seed.
AtomEnsembleSample sample_atoms(const OpticalDepthProfile &profile, std::size_t n_atoms, std::uint64_t seed,
                                SamplingScheme scheme = SamplingScheme::Independent);

/// Collective free-induction amplitude sum_j c_j exp(i 2 pi delta_j t).
cplx free_induction_amplitude(const AtomEnsembleSample &atoms, double t);

/// Causal absorption kernel built from the explicit atomic sum, normalised to the profile's
/// integrated optical depth, on a grid of n samples spaced dt.
std::vector<cplx> atomic_kernel(const AtomEnsembleSample &atoms, double integrated_depth,
                                const TimeGrid &grid);

double integrated_depth(const OpticalDepthProfile &profile);

void write_csv(std::ostream &out, const OpticalDepthProfile &profile);

} // namespace afc
