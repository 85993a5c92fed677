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

#include "afcmem/csv.hpp"
#include "afcmem/fft.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace afc {

std::string to_string(ToothShape shape)
{
    return shape == ToothShape::Square ? "square" : "gaussian";
}

ToothShape tooth_shape_from_string(const std::string &name)
{
    if (name == "square") {
        return ToothShape::Square;
    }
    if (name == "gaussian") {
        return ToothShape::Gaussian;
    }
    throw std::invalid_argument("tooth_shape must be 'square' or 'gaussian', got '" + name + "'");
}

std::size_t CombSpec::n_teeth() const
{
    return static_cast<std::size_t>(std::floor(bandwidth / delta + 1e-9));
}

double CombSpec::tooth_center(std::size_t k) const
{
    const double n = static_cast<double>(n_teeth());
    return center_detuning + (static_cast<double>(k) - 0.5 * (n - 1.0)) * delta;
}

void CombSpec::validate() const
{
    auto require = [](bool ok, const char *what) {
        if (!ok) {
            throw std::invalid_argument(std::string("comb: ") + what);
        }
    };
    require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    require(std::isfinite(bandwidth) && bandwidth >= 2.0 * delta * (1.0 - 1e-12),
            "bandwidth must be >= 2 * delta (at least two teeth)");
    require(std::isfinite(finesse) && finesse >= 1.0, "finesse must be >= 1");
    require(std::isfinite(d0) && d0 >= 0.0, "d0 must be >= 0");
    require(std::isfinite(d_peak) && d_peak >= d0, "d_peak must be >= d0");
    require(std::isfinite(center_detuning), "center_detuning must be finite");
}

namespace {

double overlap(double a0, double a1, double b0, double b1)
{
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Mean depth contributed by each tooth over every bin it touches.
void accumulate_teeth(OpticalDepthProfile &profile, const CombSpec &spec)
{
    const double df = profile.df;
    const double half_n = static_cast<double>(profile.depths.size() / 2);
    const double band_lo = spec.center_detuning - 0.5 * spec.bandwidth;
    const double band_hi = spec.center_detuning + 0.5 * spec.bandwidth;
    const double height = spec.d_peak - spec.d0;
    const double w = spec.tooth_width();
    const double sigma = w / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double reach = spec.tooth_shape == ToothShape::Square ? 0.5 * w : 6.0 * sigma;
    const auto last = static_cast<double>(profile.depths.size() - 1);

    for (std::size_t k = 0; k < spec.n_teeth(); ++k) {
        const double fc = spec.tooth_center(k);
        const double f_lo = std::max(fc - reach, band_lo);
        const double f_hi = std::min(fc + reach, band_hi);
        if (f_hi <= f_lo) {
            continue;
        }
        const double m_lo = std::clamp(std::floor(f_lo / df + half_n - 0.5), 0.0, last);
        const double m_hi = std::clamp(std::ceil(f_hi / df + half_n + 0.5), 0.0, last);
        for (auto m = static_cast<std::size_t>(m_lo); m <= static_cast<std::size_t>(m_hi); ++m) {
            const double f = profile.frequency(m);
            const double lo = std::max(f - 0.5 * df, f_lo);
            const double hi = std::min(f + 0.5 * df, f_hi);
            if (hi <= lo) {
                continue;
            }
            double mean = 0.0;
            if (spec.tooth_shape == ToothShape::Square) {
                mean = (hi - lo) / df;
            } else {
                const double s = sigma * std::sqrt(2.0);
                mean = sigma * std::sqrt(kPi / 2.0) * (std::erf((hi - fc) / s) - std::erf((lo - fc) / s)) / df;
            }
            profile.depths[m] += height * mean;
        }
    }
}

void check_resolution(const CombSpec &spec, double df)
{
    if (spec.tooth_width() / df < kMinBinsPerTooth) {
        throw std::invalid_argument("comb: tooth width " + csv::format_double(spec.tooth_width()) +
                                    " Hz is under-resolved by df = " + csv::format_double(df) +
                                    " Hz (need >= 8 bins per tooth)");
    }
}

} // namespace

OpticalDepthProfile build_profile(const CombSpec &spec, double df, std::size_t n_bins, double out_of_band_depth)
{
    spec.validate();
    if (!(df > 0.0) || n_bins < 2 || n_bins % 2 != 0) {
        throw std::invalid_argument("build_profile: need df > 0 and an even bin count");
    }
    if (out_of_band_depth < 0.0) {
        throw std::invalid_argument("build_profile: out-of-band depth must be >= 0");
    }
    check_resolution(spec, df);

    OpticalDepthProfile profile{df, std::vector<double>(n_bins, 0.0)};
    const double band_lo = spec.center_detuning - 0.5 * spec.bandwidth;
    const double band_hi = spec.center_detuning + 0.5 * spec.bandwidth;
    for (std::size_t m = 0; m < n_bins; ++m) {
        const double f = profile.frequency(m);
        const double in_band = overlap(f - 0.5 * df, f + 0.5 * df, band_lo, band_hi) / df;
        profile.depths[m] = spec.d0 * in_band + out_of_band_depth * (1.0 - in_band);
    }
    accumulate_teeth(profile, spec);
    return profile;
}

void add_comb(OpticalDepthProfile &profile, const CombSpec &spec)
{
    spec.validate();
    check_resolution(spec, profile.df);
    const double band_lo = spec.center_detuning - 0.5 * spec.bandwidth;
    const double band_hi = spec.center_detuning + 0.5 * spec.bandwidth;
    const double df = profile.df;
    for (std::size_t m = 0; m < profile.depths.size(); ++m) {
        const double f = profile.frequency(m);
        if (f + 0.5 * df < band_lo || f - 0.5 * df > band_hi) {
            continue;
        }
        profile.depths[m] += spec.d0 * overlap(f - 0.5 * df, f + 0.5 * df, band_lo, band_hi) / df;
    }
    accumulate_teeth(profile, spec);
}

TransferFunction transfer_from_kernel(std::vector<cplx> kernel, double df)
{
    fft_inplace(kernel, FftDirection::Forward);
    for (auto &k : kernel) {
        k = std::exp(-k);
    }
    return TransferFunction{df, fft_to_centered_order(kernel)};
}

TransferFunction transfer_function(const OpticalDepthProfile &profile, PhaseMode mode)
{
    const std::size_t n = profile.depths.size();
    if (mode == PhaseMode::Flat) {
        TransferFunction tf{profile.df, std::vector<cplx>(n)};
        for (std::size_t m = 0; m < n; ++m) {
            tf.t[m] = std::exp(-0.5 * profile.depths[m]);
        }
        return tf;
    }

    if ((n & (n - 1)) != 0) {
        throw std::invalid_argument("transfer_function: minimal-phase mode needs a power-of-two bin count");
    }
    // Cepstrum of log|t| = -d/2, folded onto t >= 0.
    std::vector<cplx> half_depth(n);
    for (std::size_t m = 0; m < n; ++m) {
        half_depth[m] = 0.5 * profile.depths[m];
    }
    std::vector<cplx> c = centered_to_fft_order(half_depth);
    fft_inplace(c, FftDirection::Inverse);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        double fold = 0.0;
        if (k == 0 || k == n / 2) {
            fold = 1.0;
        } else if (k < n / 2) {
            fold = 2.0;
        }
        c[k] *= fold * inv_n;
    }
    return transfer_from_kernel(std::move(c), profile.df);
}

double dephasing_factor(ToothShape shape, double finesse)
{
    if (shape == ToothShape::Square) {
        const double x = kPi / finesse;
        const double sinc = std::sin(x) / x;
        return sinc * sinc;
    }
    return std::exp(-7.0 / (finesse * finesse));
}

double analytic_efficiency(const CombSpec &spec)
{
    spec.validate();
    const double x = (spec.d_peak - spec.d0) / spec.finesse;
    return x * x * dephasing_factor(spec.tooth_shape, spec.finesse) * std::exp(-x) * std::exp(-spec.d0);
}

namespace {

double unit_uniform(std::mt19937_64 &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

AtomEnsembleSample sample_atoms(const OpticalDepthProfile &profile, std::size_t n_atoms, std::uint64_t seed,
                                SamplingScheme scheme)
{
    if (n_atoms < 100) {
        throw std::invalid_argument("sample_atoms: need at least 100 atoms");
    }
    std::vector<double> cdf(profile.depths.size());
    double total = 0.0;
    for (std::size_t m = 0; m < cdf.size(); ++m) {
        total += profile.depths[m];
        cdf[m] = total;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("sample_atoms: profile has no absorption");
    }

    std::mt19937_64 rng(seed);
    std::mt19937_64 pos_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    AtomEnsembleSample atoms;
    atoms.detunings.resize(n_atoms);
    atoms.positions.resize(n_atoms);
    atoms.weights.assign(n_atoms, 1.0 / std::sqrt(static_cast<double>(n_atoms)));

    const double n = static_cast<double>(n_atoms);
    for (std::size_t j = 0; j < n_atoms; ++j) {
        double u = unit_uniform(rng);
        if (scheme == SamplingScheme::Stratified) {
            u = (static_cast<double>(j) + u) / n;
        }
        const double target = u * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        const auto m = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            std::distance(cdf.begin(), it), static_cast<std::ptrdiff_t>(cdf.size() - 1)));
        const double below = m == 0 ? 0.0 : cdf[m - 1];
        const double frac = profile.depths[m] > 0.0 ? (target - below) / profile.depths[m] : 0.5;
        atoms.detunings[j] = profile.frequency(m) + (std::clamp(frac, 0.0, 1.0) - 0.5) * profile.df;
        atoms.positions[j] = kCrystalLength * unit_uniform(pos_rng);
    }
    return atoms;
}

cplx free_induction_amplitude(const AtomEnsembleSample &atoms, double t)
{
    cplx sum = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        sum += atoms.weights[j] * std::polar(1.0, 2.0 * kPi * atoms.detunings[j] * t);
    }
    return sum;
}

std::vector<cplx> atomic_kernel(const AtomEnsembleSample &atoms, double integrated, const TimeGrid &grid)
{
    const std::size_t n = grid.size();
    const std::size_t half = n / 2;
    std::vector<cplx> acc(half + 1);
    for (double detuning : atoms.detunings) {
        const cplx step = std::polar(1.0, 2.0 * kPi * detuning * grid.dt());
        cplx phasor = 1.0;
        for (std::size_t k = 0; k <= half; ++k) {
            acc[k] += phasor;
            phasor *= step;
        }
    }
    // Matches the folded cepstrum of the profile: c_k = (dt/2) (D / N_atoms) sum_j e^{i 2 pi delta_j t_k}.
    const double scale = 0.5 * grid.dt() * integrated / static_cast<double>(atoms.size());
    std::vector<cplx> kernel(n);
    for (std::size_t k = 0; k <= half; ++k) {
        const double fold = (k == 0 || k == half) ? 1.0 : 2.0;
        kernel[k] = fold * scale * acc[k];
    }
    return kernel;
}

double integrated_depth(const OpticalDepthProfile &profile)
{
    double sum = 0.0;
    for (double d : profile.depths) {
        sum += d;
    }
    return sum * profile.df;
}

void write_csv(std::ostream &out, const OpticalDepthProfile &profile)
{
    csv::Writer w(out, {"freq_Hz", "optical_depth"});
    for (std::size_t m = 0; m < profile.depths.size(); ++m) {
        w.row({profile.frequency(m), profile.depths[m]});
    }
}

} // namespace afc
