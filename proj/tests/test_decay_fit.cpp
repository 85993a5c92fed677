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

#include "afcmem/csv.hpp"
#include "afcmem/decay_fit.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

using namespace afc;

namespace {

std::vector<DecayPoint> synthetic(double eta0, double tau1e, double noise, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<DecayPoint> pts;
    for (int i = 1; i <= 10; ++i) {
        const double tau = 10e-6 * i;
        const double factor = noise > 0.0 ? 1.0 + noise * g(rng) : 1.0;
        pts.push_back({tau, eta0 * std::exp(-tau / tau1e) * factor});
    }
    return pts;
}

double coverage(int n_seeds, double k)
{
    int inside = 0;
    for (int s = 1; s <= n_seeds; ++s) {
        const auto f = fit_exponential_decay(synthetic(0.02, 13.1e-6, 0.05, static_cast<std::uint64_t>(s)));
        inside += std::abs(f.tau_1e - 13.1e-6) <= k * f.tau_1e_std_error ? 1 : 0;
    }
    return static_cast<double>(inside) / n_seeds;
}

} // namespace

TEST(DecayFit, NoiseFreeRecovery)
{
    const auto f = fit_exponential_decay(synthetic(0.02, 13.1e-6, 0.0, 0));
    EXPECT_NEAR(f.eta0, 0.02, 1e-6 * 0.02);
    EXPECT_NEAR(f.tau_1e, 13.1e-6, 1e-6 * 13.1e-6);
    EXPECT_EQ(f.n_points, 10u);
    EXPECT_LT(f.residual_rms, 1e-9);
}

TEST(DecayFit, MatchesNormalEquations)
{
    // Independent least squares on (tau, log eta).
    const auto pts = synthetic(0.03, 20e-6, 0.05, 99);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &p : pts) {
        const double y = std::log(p.efficiency);
        sx += p.tau;
        sy += y;
        sxx += p.tau * p.tau;
        sxy += p.tau * y;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    double rss = 0;
    for (const auto &p : pts) {
        const double r = std::log(p.efficiency) - (icept + slope * p.tau);
        rss += r * r;
    }
    const double sigma2 = rss / (n - 2);
    const double var_slope = sigma2 * n / (n * sxx - sx * sx);
    const auto f = fit_exponential_decay(pts);
    EXPECT_NEAR(f.tau_1e, -1.0 / slope, 1e-12 * f.tau_1e);
    EXPECT_NEAR(f.eta0, std::exp(icept), 1e-12 * f.eta0);
    EXPECT_NEAR(f.tau_1e_std_error, std::sqrt(var_slope) / (slope * slope), 1e-9 * f.tau_1e_std_error);
}

TEST(DecayFit, ThreeSigmaCoverageOverHundredSeeds)
{
    EXPECT_GE(coverage(100, 3.0), 0.99);
}

TEST(DecayFit, CoverageMatchesStudentT)
{
    // Log-space noise is close to gaussian, so the standardized error follows t with n - 2 dof.
    const boost::math::students_t t8(8.0);
    const double expected = 2.0 * boost::math::cdf(t8, 2.0) - 1.0;
    const double measured = coverage(2000, 2.0);
    EXPECT_NEAR(measured, expected, 0.03);
}

TEST(DecayFit, RejectsBadInput)
{
    EXPECT_THROW(fit_exponential_decay({{1e-6, 0.1}, {2e-6, 0.05}}), std::invalid_argument);
    EXPECT_THROW(fit_exponential_decay({{1e-6, 0.1}, {2e-6, 0.0}, {3e-6, 0.01}}), std::invalid_argument);
    EXPECT_THROW(fit_exponential_decay({{1e-6, 0.01}, {2e-6, 0.02}, {3e-6, 0.04}}), std::invalid_argument);
}

TEST(DecayFit, FixtureFitsMemoryDecayTime)
{
    const auto table = csv::read_numeric_file(AFCMEM_SOURCE_DIR "/fixtures/fig3d_efficiency.csv");
    std::vector<DecayPoint> pts;
    for (const auto &row : table.rows) {
        pts.push_back({row[table.column("tau_s")], row[table.column("efficiency")]});
    }
    const auto f = fit_exponential_decay(pts);
    EXPECT_NEAR(f.tau_1e, 13.1e-6, 0.8e-6);
}

TEST(TwoPulseEcho, DecayLaw)
{
    EXPECT_EQ(two_pulse_echo_intensity(0.0, 1.1e-3), 1.0);
    EXPECT_NEAR(two_pulse_echo_intensity(275e-6, 1.1e-3), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(two_pulse_echo_intensity(100e-6, 1e-3, 2.0), std::exp(-2.0 * 0.04), 1e-15);
    EXPECT_THROW(two_pulse_echo_intensity(-1e-6, 1e-3), std::invalid_argument);
}

TEST(TwoPulseEcho, RecoversT2)
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    std::vector<EchoSample> s;
    for (int i = 0; i < 20; ++i) {
        const double t12 = 10e-6 + 20e-6 * i;
        s.push_back({t12, 0.8 * two_pulse_echo_intensity(t12, 490e-6) * (1.0 + 0.02 * g(rng))});
    }
    const auto f = fit_two_pulse_echo(s);
    EXPECT_NEAR(f.t2, 490e-6, 0.02 * 490e-6);
    EXPECT_NEAR(f.amplitude, 0.8, 0.05);
    EXPECT_EQ(f.stretch, 1.0);
}

TEST(TwoPulseEcho, RecoversStretchExponent)
{
    std::vector<EchoSample> s;
    for (int i = 0; i < 25; ++i) {
        const double t12 = 5e-6 + 25e-6 * i;
        s.push_back({t12, 0.5 * two_pulse_echo_intensity(t12, 1.1e-3, 1.4)});
    }
    const auto f = fit_two_pulse_echo(s, true);
    EXPECT_NEAR(f.stretch, 1.4, 1e-4);
    EXPECT_NEAR(f.t2, 1.1e-3, 1e-4 * 1.1e-3);
    EXPECT_NEAR(f.amplitude, 0.5, 1e-5);
}

TEST(T2Table, InterpolatesAndFindsMaximum)
{
    const T2FieldTable t({0.0, 100.0, 200.0}, {0.5e-3, 1.1e-3, 0.9e-3});
    EXPECT_NEAR(t.t2_at(50.0), 0.8e-3, 1e-15);
    EXPECT_EQ(t.field_of_max_t2(), 100.0);
    EXPECT_THROW(t.t2_at(250.0), std::out_of_range);
    EXPECT_THROW(T2FieldTable({0.0, 0.0}, {1e-3, 1e-3}), std::invalid_argument);

    const auto f = T2FieldTable::from_csv(AFCMEM_SOURCE_DIR "/fixtures/t2_field.csv");
    EXPECT_NEAR(f.t2_at(100.0), 1.1e-3, 1e-15);
}
