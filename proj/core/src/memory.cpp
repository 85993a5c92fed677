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

#include "afcmem/memory.hpp"

#include "afcmem/csv.hpp"
#include "afcmem/fft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace afc {

DecoherenceModel DecoherenceModel::with_combined_tm(double t2, double tm, double t1)
{
    const double rate = 1.0 / tm - 4.0 / t2;
    if (!(rate >= 0.0)) {
        throw std::invalid_argument("decoherence: combined T_m must be <= t2 / 4");
    }
    DecoherenceModel dec;
    dec.t2 = t2;
    dec.tm_extra = rate > 0.0 ? 1.0 / rate : kInfinity;
    dec.t1 = t1;
    return dec;
}

double DecoherenceModel::combined_tm() const
{
    const double rate = 4.0 / t2 + 1.0 / tm_extra;
    return rate > 0.0 ? 1.0 / rate : kInfinity;
}

double DecoherenceModel::efficiency_decay(double tau) const
{
    return std::exp(-4.0 * tau / t2 - tau / tm_extra);
}

void DecoherenceModel::validate() const
{
    if (!(t2 > 0.0) || !(tm_extra > 0.0) || !(t1 > 0.0)) {
        throw std::invalid_argument("decoherence: t2, tm_extra and t1 must be > 0");
    }
    if (std::isfinite(t1) && t2 > 2.0 * t1) {
        throw std::invalid_argument("decoherence: t2 must be <= 2 * t1");
    }
}

ComplexEnvelope propagate(const ComplexEnvelope &input, const TransferFunction &tf)
{
    Spectrum spec = to_spectrum(input);
    if (tf.t.size() != spec.size() || std::abs(tf.df - spec.df()) > 1e-9 * spec.df()) {
        throw std::invalid_argument("propagate: transfer function does not match the input grid");
    }
    for (std::size_t m = 0; m < spec.size(); ++m) {
        spec.bins()[m] *= tf.t[m];
    }
    return to_time(spec, input.grid(), input.carrier_detuning());
}

TransferFunction apply_decoherence(const TransferFunction &tf, double tau, const DecoherenceModel &dec)
{
    if (!dec.enabled()) {
        return tf;
    }
    const std::size_t n = tf.t.size();
    const double dt = 1.0 / (static_cast<double>(n) * tf.df);
    std::vector<cplx> h = centered_to_fft_order(tf.t);
    fft_inplace(h, FftDirection::Inverse);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k < n / 2 ? static_cast<double>(k) * dt : (static_cast<double>(k) - static_cast<double>(n)) * dt;
        const double order = std::round(t / tau);
        double amp = 1.0;
        if (order >= 1.0) {
            amp = std::sqrt(dec.efficiency_decay(order * tau));
        }
        h[k] *= amp * inv_n;
    }
    fft_inplace(h, FftDirection::Forward);
    return TransferFunction{tf.df, fft_to_centered_order(h)};
}

StorageResult analyze_storage(const ComplexEnvelope &input, ComplexEnvelope output, double tau, int max_echo_order)
{
    StorageResult r{std::move(output), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
    r.input_energy = input.energy();
    if (!(r.input_energy > 0.0)) {
        throw std::invalid_argument("store: input pulse has zero energy");
    }
    r.input_time = input.centroid();
    const double w = input.intensity_fwhm();
    const double span = input.grid().span();
    if (r.input_time + tau + 2.0 * w > span) {
        throw std::invalid_argument("store: echo at " + csv::format_double(r.input_time + tau) +
                                    " s falls beyond the grid span " + csv::format_double(span) + " s");
    }
    if (4.0 * w >= tau) {
        throw std::invalid_argument("store: pulse FWHM too long to separate the echo from the transmitted pulse");
    }
    r.transmitted_energy = r.output.energy_between(r.input_time - 2.0 * w, r.input_time + 2.0 * w);
    const double e0 = r.input_time + tau - 2.0 * w;
    const double e1 = r.input_time + tau + 2.0 * w;
    r.echo_energy = r.output.energy_between(e0, e1);
    if (r.echo_energy > 0.0) {
        r.echo_time = r.output.centroid_between(e0, e1);
    } else {
        r.echo_time = std::numeric_limits<double>::quiet_NaN();
    }
    r.echo_delay = r.echo_time - r.input_time;
    r.efficiency = r.echo_energy / r.input_energy;
    for (int order = 2; order <= max_echo_order; ++order) {
        const double c = r.input_time + order * tau;
        if (c + 2.0 * w > span) {
            break;
        }
        r.higher_order_echo_energies.push_back(r.output.energy_between(c - 2.0 * w, c + 2.0 * w));
    }
    return r;
}

StorageResult store_and_recall(const ComplexEnvelope &input, const CombSpec &spec, const DecoherenceModel &dec,
                               const StorageOptions &opts)
{
    spec.validate();
    dec.validate();
    const TimeGrid &grid = input.grid();
    const double tau = spec.storage_time();
    if (!(grid.span() > 2.0 * tau)) {
        throw std::invalid_argument("store: grid span must exceed 2 / delta");
    }

    const Spectrum in_spec = to_spectrum(input);
    const double total = in_spec.energy();
    const double lo = spec.center_detuning - 0.5 * spec.bandwidth;
    const double hi = spec.center_detuning + 0.5 * spec.bandwidth;
    if (total > 0.0 && in_spec.energy_between(lo, hi) < opts.min_in_band_fraction * total) {
        throw std::invalid_argument("store: pulse bandwidth exceeds comb (" +
                                    csv::format_double(in_spec.energy_between(lo, hi) / total) +
                                    " of energy inside the comb bandwidth)");
    }

    const auto profile = build_profile(spec, grid.df(), grid.size(), opts.out_of_band_depth);
    const auto tf = apply_decoherence(transfer_function(profile, opts.phase), tau, dec);
    return analyze_storage(input, propagate(input, tf), tau, opts.max_echo_order);
}

std::vector<SweepPoint> efficiency_sweep(const std::vector<double> &taus, const CombSpec &comb_template,
                                         const DecoherenceModel &dec, const SweepOptions &opts)
{
    for (double tau : taus) {
        if (!(tau > 0.0)) {
            throw std::invalid_argument("sweep: storage times must be > 0");
        }
    }
    const auto input = gaussian_pulse(opts.grid, opts.pulse_center, opts.pulse_fwhm, comb_template.center_detuning, 1.0);

    std::vector<SweepPoint> out(taus.size());
    std::vector<std::exception_ptr> errors(taus.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < taus.size(); i = next++) {
            try {
                CombSpec spec = comb_template;
                spec.delta = 1.0 / taus[i];
                const auto r = store_and_recall(input, spec, dec, opts.storage);
                out[i] = SweepPoint{taus[i], r.efficiency, r.echo_delay};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(taus.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

std::vector<DecayPoint> to_decay_points(const std::vector<SweepPoint> &sweep)
{
    std::vector<DecayPoint> pts;
    pts.reserve(sweep.size());
    for (const auto &p : sweep) {
        pts.push_back({p.tau, p.efficiency});
    }
    return pts;
}

CavityProjection cavity_enhanced_projection(const CombSpec &spec, const DecoherenceModel &dec, double tau)
{
    spec.validate();
    dec.validate();
    if (!(spec.d0 < spec.d_peak)) {
        throw std::invalid_argument("cavity projection: requires d0 < d_peak");
    }
    if (tau < 0.0) {
        throw std::invalid_argument("cavity projection: tau must be >= 0");
    }
    const double d_tilde = (spec.d_peak - spec.d0) / spec.finesse;
    const double decay = dec.efficiency_decay(tau);
    CavityProjection p;
    p.impedance_factor = 1.0 / d_tilde;
    p.cavity = std::exp(-2.0 * spec.d0 * p.impedance_factor) * dephasing_factor(spec.tooth_shape, spec.finesse) * decay;
    p.single_pass = analytic_efficiency(spec) * decay;
    return p;
}

} // namespace afc
