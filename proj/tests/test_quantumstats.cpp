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

#include "afcmem/presets.hpp"
#include "afcmem/quantumstats.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace afc;

namespace {

// Brute-force expectation over the thermal pair-number distribution truncated at 20 pairs
// (renormalized), with threshold detectors and independent darks.
ClickProbabilities enumerate(const PairSourceModel &m)
{
    const double mu = m.mean_pairs_per_window;
    double norm = 0.0;
    ClickProbabilities p;
    for (int n = 0; n <= 20; ++n) {
        const double pn = std::pow(mu, n) / std::pow(1.0 + mu, n + 1);
        const double ph = 1.0 - (1.0 - m.dark_prob_herald) * std::pow(1.0 - m.herald_efficiency, n);
        const double ps = 1.0 - (1.0 - m.dark_prob_signal) * std::pow(1.0 - m.signal_efficiency, n);
        norm += pn;
        p.herald += pn * ph;
        p.signal += pn * ps;
        p.coincidence += pn * ph * ps;
    }
    p.herald /= norm;
    p.signal /= norm;
    p.coincidence /= norm;
    return p;
}

PairSourceModel source(double mu, double eh, double es, double dh, double ds)
{
    PairSourceModel m;
    m.mean_pairs_per_window = mu;
    m.herald_efficiency = eh;
    m.signal_efficiency = es;
    m.dark_prob_herald = dh;
    m.dark_prob_signal = ds;
    return m;
}

} // namespace

TEST(PairSource, AnalyticMatchesEnumeration)
{
    for (const auto &m : {source(0.1, 1.0, 1.0, 0.0, 0.0), source(0.05, 0.3, 0.2, 1e-4, 1e-3),
                          source(0.02, 0.25, 0.0035, 1e-5, 2e-4)}) {
        const auto a = click_probabilities(m);
        const auto b = enumerate(m);
        EXPECT_NEAR(a.herald, b.herald, 1e-12);
        EXPECT_NEAR(a.signal, b.signal, 1e-12);
        EXPECT_NEAR(a.coincidence, b.coincidence, 1e-12);
    }
}

TEST(PairSource, ThermalUnitEfficiencyG2)
{
    const auto m = source(0.1, 1.0, 1.0, 0.0, 0.0);
    EXPECT_NEAR(expected_g2(m), 11.0, 1e-12);
    const auto e = g2_from_counts(simulate_counts(m, 1000000, 5));
    EXPECT_NEAR(e.g2, 11.0, 3.0 * e.std_error);
}

TEST(PairSource, VanishingBrightnessGivesNoClicks)
{
    const auto c = simulate_counts(source(1e-12, 0.5, 0.5, 0.0, 0.0), 100000, 1);
    EXPECT_EQ(c.singles_herald, 0);
    EXPECT_EQ(c.singles_signal, 0);
    EXPECT_EQ(c.coincidences, 0);
}

TEST(PairSource, PerfectCorrelationLimit)
{
    const auto c = simulate_counts(source(0.01, 1.0, 1.0, 0.0, 0.0), 1000000, 2);
    EXPECT_EQ(c.coincidences, c.singles_herald);
    EXPECT_EQ(c.coincidences, c.singles_signal);
}

TEST(PairSource, DeterministicAndThreadIndependent)
{
    const auto m = source(0.05, 0.3, 0.3, 1e-4, 1e-4);
    const auto a = simulate_counts(m, 3 * kBatchWindows + 12345, 77, 1);
    const auto b = simulate_counts(m, 3 * kBatchWindows + 12345, 77, 3);
    const auto c = simulate_counts(m, 3 * kBatchWindows + 12345, 78, 1);
    EXPECT_EQ(a.singles_herald, b.singles_herald);
    EXPECT_EQ(a.singles_signal, b.singles_signal);
    EXPECT_EQ(a.coincidences, b.coincidences);
    EXPECT_EQ(a.n_windows, 3 * kBatchWindows + 12345);
    EXPECT_NE(a.coincidences, c.coincidences);
}

TEST(PairSource, Validation)
{
    EXPECT_THROW(source(0.0, 0.5, 0.5, 0, 0).validate(), std::invalid_argument);
    EXPECT_THROW(source(0.1, 0.0, 0.5, 0, 0).validate(), std::invalid_argument);
    EXPECT_THROW(source(0.1, 0.5, 1.5, 0, 0).validate(), std::invalid_argument);
    EXPECT_THROW(source(0.1, 0.5, 0.5, -0.1, 0).validate(), std::invalid_argument);
    EXPECT_THROW(simulate_counts(source(0.1, 0.5, 0.5, 0, 0), 9999, 1), std::invalid_argument);
}

TEST(G2Estimator, IndependenceGivesOne)
{
    CoincidenceCounts c{1000000, 2000, 5000, 10};
    EXPECT_DOUBLE_EQ(g2_from_counts(c).g2, 1.0);
    EXPECT_THROW(g2_from_counts({1000, 0, 10, 0}), std::invalid_argument);
    EXPECT_THROW(g2_from_counts({1000, 10, 10, 11}), std::invalid_argument);
}

TEST(G2Estimator, StandardErrorScalesAsInverseRootN)
{
    const auto m = source(0.05, 0.25, 0.25, 1e-5, 1e-5);
    std::vector<double> lx, ly;
    for (long long n : {10000LL, 100000LL, 1000000LL, 10000000LL}) {
        const auto e = g2_from_counts(simulate_counts(m, n, 9));
        lx.push_back(std::log10(static_cast<double>(n)));
        ly.push_back(std::log10(e.std_error));
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(G2Estimator, ClassicalBound)
{
    EXPECT_TRUE(classicality_check(18.0));
    EXPECT_TRUE(classicality_check(4.58));
    EXPECT_FALSE(classicality_check(2.0));
    EXPECT_FALSE(classicality_check(1.0));
    EXPECT_THROW(classicality_check(-1.0), std::invalid_argument);
}

TEST(Memory, LossLeavesExpectedG2UnchangedToLeadingOrder)
{
    // Threshold detectors saturate on multi-pair windows, so loss moves g2 by O(mu * eta_s).
    for (double mu : {0.06, 0.006, 0.0006}) {
        const auto m = source(mu, 0.25, 0.25, 0.0, 0.0);
        const double ref = expected_g2(m);
        for (double alpha : {1.0, 0.1, 0.0035}) {
            const double rel = std::abs(expected_g2(with_memory(m, alpha, 0.0)) - ref) / ref;
            EXPECT_LT(rel, mu * m.signal_efficiency) << mu << " " << alpha;
        }
    }
}

TEST(Memory, LossInvarianceEmpirical)
{
    const auto m = source(0.06, 0.25, 0.25, 0.0, 0.0);
    const auto ref = g2_from_counts(simulate_counts(m, 10000000, 21));
    for (double alpha : {0.1, 0.0035}) {
        const auto e = g2_from_counts(simulate_counts(with_memory(m, alpha, 0.0), 10000000, 22));
        const double sigma = std::hypot(ref.std_error, e.std_error);
        EXPECT_NEAR(e.g2, ref.g2, 3.0 * sigma) << alpha;
    }
}

TEST(Memory, DarkCountsDegradeG2)
{
    double prev = 1e9;
    for (double dark : {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
        const double g = expected_g2(source(0.06, 0.25, 0.25, dark, dark));
        EXPECT_LT(g, prev);
        prev = g;
    }
}

TEST(Solvers, RoundTrip)
{
    auto m = source(0.1, 0.25, 0.25, 1e-5, 1e-5);
    const double mu = solve_mean_pairs_for_g2(m, 18.0);
    m.mean_pairs_per_window = mu;
    EXPECT_NEAR(expected_g2(m), 18.0, 1e-9);
    // High-brightness branch: more pairs lower g2.
    m.mean_pairs_per_window = 1.1 * mu;
    EXPECT_LT(expected_g2(m), 18.0);

    m.mean_pairs_per_window = mu;
    const auto stored = with_memory(m, 0.0035, 0.0);
    const double bg = solve_signal_background_for_g2(stored, 4.58);
    EXPECT_NEAR(expected_g2(with_memory(stored, 1.0, bg)), 4.58, 1e-9);
    EXPECT_THROW(solve_signal_background_for_g2(stored, 100.0), std::invalid_argument);
}

TEST(Presets, CalibratedSourcesHitTargets)
{
    EXPECT_NEAR(expected_g2(presets::pair_source_no_memory()), 18.0, 0.01);
    EXPECT_NEAR(expected_g2(presets::pair_source_with_memory()), 4.58, 0.01);
    EXPECT_NEAR(presets::pair_source_with_memory().signal_efficiency, 0.25 * 0.0035, 1e-15);
}
