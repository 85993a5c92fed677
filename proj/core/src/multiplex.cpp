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

#include "afcmem/multiplex.hpp"

#include "afcmem/csv.hpp"

#include <cmath>
#include <stdexcept>

namespace afc {

double ChannelPlan::channel_center(std::size_t j) const
{
    return base_comb.center_detuning + static_cast<double>(j) * spacing;
}

CombSpec ChannelPlan::channel_comb(std::size_t j) const
{
    CombSpec c = base_comb;
    c.bandwidth = channel_bandwidth;
    c.center_detuning = channel_center(j);
    return c;
}

double ChannelPlan::total_span() const
{
    return static_cast<double>(n_channels - 1) * spacing + channel_bandwidth;
}

void ChannelPlan::validate() const
{
    if (n_channels < 1) {
        throw std::invalid_argument("plan: n_channels must be >= 1");
    }
    if (!(channel_bandwidth > 0.0)) {
        throw std::invalid_argument("plan: channel_bandwidth must be > 0");
    }
    if (n_channels > 1 && !(spacing > channel_bandwidth)) {
        throw std::invalid_argument("plan: spacing must exceed channel_bandwidth");
    }
    channel_comb(0).validate();
}

cplx FilterCavity::amplitude_response(double detuning) const
{
    const double x = 2.0 * (detuning - resonance_detuning) / fwhm;
    return std::sqrt(peak_transmission) / cplx(1.0, -x);
}

double FilterCavity::power_transmission(double detuning) const
{
    const double x = 2.0 * (detuning - resonance_detuning) / fwhm;
    return peak_transmission / (1.0 + x * x);
}

void FilterCavity::validate() const
{
    if (!(fwhm > 0.0)) {
        throw std::invalid_argument("cavity: fwhm must be > 0");
    }
    if (!(peak_transmission > 0.0 && peak_transmission <= 1.0)) {
        throw std::invalid_argument("cavity: peak_transmission must be in (0, 1]");
    }
}

ComplexEnvelope serrodyne(const ComplexEnvelope &env, double shift, double leakage)
{
    if (!(std::abs(shift) < env.grid().nyquist())) {
        throw std::invalid_argument("serrodyne: |shift| " + csv::format_double(std::abs(shift)) +
                                    " Hz must be below the grid Nyquist frequency " +
                                    csv::format_double(env.grid().nyquist()) + " Hz");
    }
    if (!(leakage >= 0.0 && leakage <= 1.0)) {
        throw std::invalid_argument("serrodyne: leakage must be in [0, 1]");
    }
    ComplexEnvelope out = env;
    const double keep = std::sqrt(1.0 - leakage);
    const double leak = std::sqrt(leakage);
    auto &s = out.samples();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const cplx ramp = std::polar(1.0, 2.0 * kPi * shift * env.grid().time(k));
        s[k] = leakage > 0.0 ? s[k] * (keep * ramp + leak) : s[k] * ramp;
    }
    return ComplexEnvelope(out.grid(), std::move(s), env.carrier_detuning() + shift);
}

ComplexEnvelope cavity_filter(const ComplexEnvelope &env, const FilterCavity &cav)
{
    cav.validate();
    Spectrum spec = to_spectrum(env);
    for (std::size_t m = 0; m < spec.size(); ++m) {
        spec.bins()[m] *= cav.amplitude_response(spec.frequency(m));
    }
    return to_time(spec, env.grid(), env.carrier_detuning());
}

OpticalDepthProfile build_plan_profile(const ChannelPlan &plan, const TimeGrid &grid)
{
    plan.validate();
    OpticalDepthProfile profile = build_profile(plan.channel_comb(0), grid.df(), grid.size());
    for (std::size_t j = 1; j < plan.n_channels; ++j) {
        add_comb(profile, plan.channel_comb(j));
    }
    return profile;
}

namespace {

struct MemoryOutput {
    ComplexEnvelope field;
    std::vector<std::pair<double, double>> slots;
};

MemoryOutput recall_all(const FeedforwardRun &run)
{
    const auto &plan = run.plan;
    plan.validate();
    run.cavity.validate();
    run.decoherence.validate();
    if (run.temporal_offsets.size() != plan.n_channels) {
        throw std::invalid_argument("feedforward: need one temporal offset per channel");
    }
    if (!run.channel_gains.empty() && run.channel_gains.size() != plan.n_channels) {
        throw std::invalid_argument("feedforward: channel_gains must be empty or one per channel");
    }
    if (run.selected >= plan.n_channels) {
        throw std::invalid_argument("feedforward: selected channel out of range");
    }
    const double tau = plan.base_comb.storage_time();
    const double w = run.pulse_fwhm;
    std::vector<std::pair<double, double>> slots;
    for (double t : run.temporal_offsets) {
        slots.emplace_back(t - 2.0 * w, t + tau + 2.0 * w);
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
            const double sep = std::abs(run.temporal_offsets[i] - run.temporal_offsets[j]);
            if (!(sep > w + tau) || (slots[i].first < slots[j].second && slots[j].first < slots[i].second)) {
                throw std::invalid_argument("feedforward: time slots of channels " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
            }
        }
    }

    ComplexEnvelope input(run.grid);
    for (std::size_t j = 0; j < plan.n_channels; ++j) {
        const double gain = run.channel_gains.empty() ? 1.0 : std::sqrt(run.channel_gains[j]);
        const auto pulse = gaussian_pulse(run.grid, run.temporal_offsets[j], w, plan.channel_center(j), gain);
        for (std::size_t k = 0; k < run.grid.size(); ++k) {
            input.samples()[k] += pulse.samples()[k];
        }
    }
    if (slots.back().second > run.grid.span() || slots.front().first < 0.0) {
        throw std::invalid_argument("feedforward: time slots do not fit on the grid");
    }

    const auto profile = build_plan_profile(plan, run.grid);
    const auto tf = apply_decoherence(transfer_function(profile, run.phase), tau, run.decoherence);
    return {propagate(input, tf), std::move(slots)};
}

} // namespace

namespace {

FeedforwardResult select_and_filter(const FeedforwardRun &run, const MemoryOutput &recalled)
{
    if (run.selected >= run.plan.n_channels) {
        throw std::invalid_argument("feedforward: selected channel out of range");
    }
    const double shift = -static_cast<double>(run.selected) * run.plan.spacing;
    const auto shifted = serrodyne(recalled.field, shift, run.serrodyne_leakage);
    const auto filtered = cavity_filter(shifted, run.cavity);

    FeedforwardResult r{{}, run.grid, {}, {}, {}, recalled.slots};
    r.intensity.resize(run.grid.size());
    for (std::size_t k = 0; k < r.intensity.size(); ++k) {
        r.intensity[k] = std::norm(filtered.samples()[k]);
    }
    for (const auto &[t0, t1] : recalled.slots) {
        const double before = shifted.energy_between(t0, t1);
        const double after = filtered.energy_between(t0, t1);
        r.slot_energy_before_cavity.push_back(before);
        r.slot_energy_after_cavity.push_back(after);
        r.crosstalk_row.push_back(before > 0.0 ? after / before : 0.0);
    }
    return r;
}

} // namespace

FeedforwardResult simulate_feedforward_run(const FeedforwardRun &run)
{
    return select_and_filter(run, recall_all(run));
}

std::vector<std::vector<double>> crosstalk_matrix(FeedforwardRun run)
{
    const auto recalled = recall_all(run);
    std::vector<std::vector<double>> m;
    for (std::size_t i = 0; i < run.plan.n_channels; ++i) {
        run.selected = i;
        m.push_back(select_and_filter(run, recalled).crosstalk_row);
    }
    return m;
}

std::vector<ChannelScanPoint> resonance_scan(const FeedforwardRun &run)
{
    const auto recalled = recall_all(run);
    const double tau = run.plan.base_comb.storage_time();
    const double w = run.pulse_fwhm;
    std::vector<ChannelScanPoint> out;
    for (std::size_t j = 0; j < run.plan.n_channels; ++j) {
        FilterCavity cav = run.cavity;
        cav.resonance_detuning = run.plan.channel_center(j);
        const auto filtered = cavity_filter(recalled.field, cav);
        const double t = run.temporal_offsets[j];
        out.push_back({j, cav.resonance_detuning, filtered.energy_between(t - 2.0 * w, t + 2.0 * w),
                       filtered.energy_between(t + tau - 2.0 * w, t + tau + 2.0 * w)});
    }
    return out;
}

long long multimode_capacity(double optical_storage_time, double mode_duration, long long n_channels)
{
    if (!(optical_storage_time > 0.0) || !(mode_duration > 0.0) || n_channels < 1) {
        throw std::invalid_argument("multimode_capacity: inputs must be positive");
    }
    const auto temporal = static_cast<long long>(std::floor(optical_storage_time / mode_duration * (1.0 + 1e-12)));
    return temporal * n_channels;
}

} // namespace afc
