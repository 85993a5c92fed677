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
#include "afcmem/presets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace afc;

namespace {

CombSpec comb(double delta, double finesse, double d, double d0, double bw)
{
    CombSpec s;
    s.delta = delta;
    s.finesse = finesse;
    s.d_peak = d;
    s.d0 = d0;
    s.bandwidth = bw;
    return s;
}

const TimeGrid kGrid(1 << 16, 4e-9);

} // namespace

TEST(Decoherence, CombinedTimeAndComposition)
{
    const auto dec = DecoherenceModel::with_combined_tm(1.1e-3, 13.1e-6);
    EXPECT_NEAR(dec.combined_tm(), 13.1e-6, 1e-18);
    EXPECT_NEAR(dec.efficiency_decay(13.1e-6), std::exp(-1.0), 1e-12);
    EXPECT_NEAR(dec.efficiency_decay(30e-6), dec.efficiency_decay(10e-6) * dec.efficiency_decay(20e-6), 1e-15);
    EXPECT_NEAR(dec.tm_extra, 1.0 / (1.0 / 13.1e-6 - 4.0 / 1.1e-3), 1e-15);

    DecoherenceModel t2_only;
    t2_only.t2 = 1.1e-3;
    EXPECT_NEAR(t2_only.combined_tm(), 275e-6, 1e-15);
    EXPECT_NEAR(t2_only.efficiency_decay(275e-6), std::exp(-1.0), 1e-15);

    EXPECT_FALSE(DecoherenceModel::none().enabled());
    EXPECT_EQ(DecoherenceModel::none().efficiency_decay(1.0), 1.0);
}

TEST(Decoherence, Validation)
{
    DecoherenceModel d;
    d.t2 = 3e-3;
    d.t1 = 1.3e-3;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.t2 = -1.0;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    EXPECT_THROW(DecoherenceModel::with_combined_tm(1.1e-3, 300e-6), std::invalid_argument);
}

TEST(Storage, EchoAtInverseSpacingFlatPhase)
{
    StorageOptions opts;
    opts.phase = PhaseMode::Flat;
    for (double delta : {100e3, 150e3, 200e3}) {
        const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
        const auto r = store_and_recall(in, comb(delta, 2, 1, 0, 2e6), DecoherenceModel::none(), opts);
        EXPECT_NEAR(r.echo_delay, 1.0 / delta, kGrid.dt()) << delta;
    }
}

TEST(Storage, CausalEchoStaysNearInverseSpacing)
{
    const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
    const auto r = store_and_recall(in, comb(200e3, 2, 1, 0, 2e6), DecoherenceModel::none());
    EXPECT_NEAR(r.echo_delay, 5e-6, 0.1e-6);
}

TEST(Storage, MatchesAnalyticEfficiency)
{
    for (double f : {2.0, 4.0}) {
        for (double d0 : {0.0, 0.2}) {
            const auto spec = comb(200e3, f, 1, d0, 2e6);
            const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
            const auto r = store_and_recall(in, spec, DecoherenceModel::none());
            const double a = analytic_efficiency(spec);
            EXPECT_NEAR(r.efficiency, a, 0.02 * a) << "F=" << f << " d0=" << d0;
        }
    }
}

TEST(Storage, IsPassive)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const auto spec = comb(200e3, 3, 2, 0.1, 2e6);
    for (int trial = 0; trial < 3; ++trial) {
        const auto profile = build_profile(spec, kGrid.df(), kGrid.size());
        const auto tf = transfer_function(profile, PhaseMode::MinimalPhase);
        std::vector<cplx> x(kGrid.size());
        for (auto &v : x) {
            v = {g(rng), g(rng)};
        }
        const ComplexEnvelope in(kGrid, x);
        EXPECT_LE(propagate(in, tf).energy(), in.energy() * (1.0 + 1e-12));
    }
    const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
    const auto r = store_and_recall(in, spec, DecoherenceModel::none());
    EXPECT_LE(r.transmitted_energy + r.echo_energy, r.input_energy);
    EXPECT_GE(r.efficiency, 0.0);
    EXPECT_LE(r.efficiency, 1.0);
}

TEST(Storage, IsLinear)
{
    const auto spec = comb(200e3, 2, 1, 0, 2e6);
    const auto tf = transfer_function(build_profile(spec, kGrid.df(), kGrid.size()), PhaseMode::MinimalPhase);
    const auto a = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
    const auto b = gaussian_pulse(kGrid, 30e-6, 0.7e-6, 1e5, 1.0);
    const cplx alpha(0.4, 0.9);
    std::vector<cplx> mix(kGrid.size());
    for (std::size_t k = 0; k < mix.size(); ++k) {
        mix[k] = alpha * a.samples()[k] + b.samples()[k];
    }
    const auto out_mix = propagate(ComplexEnvelope(kGrid, mix), tf);
    const auto oa = propagate(a, tf);
    const auto ob = propagate(b, tf);
    for (std::size_t k = 0; k < mix.size(); k += 97) {
        EXPECT_NEAR(std::abs(out_mix.samples()[k] - (alpha * oa.samples()[k] + ob.samples()[k])), 0.0, 1e-12);
    }

    const auto r1 = store_and_recall(a, spec, DecoherenceModel::none());
    const auto r2 = store_and_recall(a.scaled(7.0), spec, DecoherenceModel::none());
    // The integration windows come from the measured input centroid, so a window edge that lands
    // on a sample can move by one sample.
    EXPECT_NEAR(r2.efficiency, r1.efficiency, 1e-6 * r1.efficiency);
    EXPECT_NEAR(r2.echo_energy, 49.0 * r1.echo_energy, 1e-6 * r2.echo_energy);
}

TEST(Storage, DecoherenceScalesEchoByDecayFactor)
{
    const auto spec = comb(100e3, 2, 1, 0, 2e6);
    const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
    const auto dec = DecoherenceModel::with_combined_tm(1.1e-3, 13.1e-6);
    const auto plain = store_and_recall(in, spec, DecoherenceModel::none());
    const auto decayed = store_and_recall(in, spec, dec);
    EXPECT_NEAR(decayed.efficiency / plain.efficiency, dec.efficiency_decay(10e-6), 1e-3);
    EXPECT_NEAR(decayed.transmitted_energy, plain.transmitted_energy, 1e-9 * plain.transmitted_energy);
}

TEST(Storage, ReportsHigherOrderEchoes)
{
    const auto in = gaussian_pulse(kGrid, 10e-6, 1e-6, 0.0, 1.0);
    const auto r = store_and_recall(in, comb(200e3, 3, 2, 0, 2e6), DecoherenceModel::none());
    ASSERT_GE(r.higher_order_echo_energies.size(), 1u);
    EXPECT_GT(r.higher_order_echo_energies[0], 0.0);
    EXPECT_LT(r.higher_order_echo_energies[0], r.echo_energy);
}

TEST(Storage, RejectsInvalidInputs)
{
    const auto spec = comb(200e3, 2, 1, 0, 1e6);
    // Spectrum wider than the comb.
    const auto narrow = gaussian_pulse(kGrid, 10e-6, 0.2e-6, 0.0, 1.0);
    EXPECT_THROW(store_and_recall(narrow, spec, DecoherenceModel::none()), std::invalid_argument);
    // Echo beyond the end of the grid.
    const auto late = gaussian_pulse(kGrid, kGrid.span() - 4e-6, 1e-6, 0.0, 1.0);
    EXPECT_THROW(store_and_recall(late, spec, DecoherenceModel::none()), std::invalid_argument);
    // Pulse too long to separate from its echo.
    const auto slow = gaussian_pulse(kGrid, 20e-6, 1.5e-6, 0.0, 1.0);
    EXPECT_THROW(store_and_recall(slow, comb(500e3, 2, 1, 0, 4e6), DecoherenceModel::none()), std::invalid_argument);
}

TEST(Sweep, IndependentOfThreadCount)
{
    SweepOptions opts;
    opts.grid = TimeGrid(1 << 17, 8e-9);
    std::vector<double> taus{10e-6, 20e-6, 30e-6, 40e-6};
    const auto dec = presets::memory_decoherence();
    opts.threads = 1;
    const auto a = efficiency_sweep(taus, presets::storage_comb_template(), dec, opts);
    opts.threads = 3;
    const auto b = efficiency_sweep(taus, presets::storage_comb_template(), dec, opts);
    ASSERT_EQ(a.size(), taus.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].tau, taus[i]);
        EXPECT_EQ(a[i].efficiency, b[i].efficiency);
        EXPECT_EQ(a[i].echo_delay, b[i].echo_delay);
        if (i > 0) {
            EXPECT_LT(a[i].efficiency, a[i - 1].efficiency);
        }
    }
    const auto pts = to_decay_points(a);
    EXPECT_EQ(pts[2].tau, 30e-6);
    EXPECT_EQ(pts[2].efficiency, a[2].efficiency);
    EXPECT_THROW(efficiency_sweep({-1e-6}, presets::storage_comb_template(), dec, opts), std::invalid_argument);
}

TEST(Cavity, ProjectionFormula)
{
    const auto spec = presets::cavity_comb();
    const auto dec = presets::cavity_decoherence();
    const auto p = cavity_enhanced_projection(spec, dec, 30e-6);
    const double f_imp = spec.finesse / (spec.d_peak - spec.d0);
    const double x = kPi / spec.finesse;
    const double expected = std::exp(-2.0 * spec.d0 * f_imp) * std::pow(std::sin(x) / x, 2) * std::exp(-4.0 * 30e-6 / 1.1e-3);
    EXPECT_NEAR(p.impedance_factor, f_imp, 1e-12);
    EXPECT_NEAR(p.cavity, expected, 1e-12);
    EXPECT_NEAR(p.single_pass, analytic_efficiency(spec) * dec.efficiency_decay(30e-6), 1e-15);
    EXPECT_GT(p.cavity, p.single_pass);
}

TEST(Cavity, ShippedCalibrationGivesFifteenPercent)
{
    const auto p = cavity_enhanced_projection(presets::cavity_comb(), presets::cavity_decoherence(), presets::kCavityTau);
    EXPECT_NEAR(p.cavity, 0.15, 0.01);
}

TEST(Cavity, BackgroundLowersProjection)
{
    auto spec = presets::cavity_comb();
    double prev = 2.0;
    for (double d0 : {0.0, 0.05, 0.1, 0.2, 0.4}) {
        spec.d0 = d0;
        const double c = cavity_enhanced_projection(spec, presets::cavity_decoherence(), 30e-6).cavity;
        EXPECT_LT(c, prev);
        prev = c;
    }
    spec.d0 = spec.d_peak;
    EXPECT_THROW(cavity_enhanced_projection(spec, presets::cavity_decoherence(), 30e-6), std::invalid_argument);
}
