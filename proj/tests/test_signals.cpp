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

#include "afcmem/fft.hpp"
#include "afcmem/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace afc;

namespace {

std::vector<cplx> naive_dft(const std::vector<cplx> &x, double sign)
{
    const std::size_t n = x.size();
    std::vector<cplx> y(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double ph = sign * 2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
            s += x[k] * cplx(std::cos(ph), std::sin(ph));
        }
        y[m] = s;
    }
    return y;
}

std::vector<cplx> random_samples(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto &x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

} // namespace

TEST(Fft, MatchesDirectSummation)
{
    for (std::size_t n : {2u, 8u, 64u, 256u}) {
        const auto x = random_samples(n, 7);
        for (auto dir : {FftDirection::Forward, FftDirection::Inverse}) {
            auto y = x;
            fft_inplace(y, dir);
            const auto ref = naive_dft(x, dir == FftDirection::Forward ? -1.0 : 1.0);
            for (std::size_t m = 0; m < n; ++m) {
                EXPECT_NEAR(std::abs(y[m] - ref[m]), 0.0, 1e-9 * static_cast<double>(n));
            }
        }
    }
}

TEST(Fft, RejectsNonPowerOfTwo)
{
    std::vector<cplx> x(12);
    EXPECT_THROW(fft_inplace(x, FftDirection::Forward), std::invalid_argument);
}

TEST(TimeGrid, RejectsBadShapes)
{
    EXPECT_THROW(TimeGrid(1000, 1e-9), std::invalid_argument);
    EXPECT_THROW(TimeGrid(1024, 0.0), std::invalid_argument);
    const TimeGrid g(1024, 2e-9);
    EXPECT_DOUBLE_EQ(g.df() * g.span(), 1.0);
    EXPECT_DOUBLE_EQ(g.nyquist(), 0.25e9);
}

TEST(GaussianPulse, PeaksAtCenterSample)
{
    const TimeGrid g(1 << 16, 1e-9);
    const auto p = gaussian_pulse(g, 5e-6, 1e-6, 0.0, 1.0);
    EXPECT_EQ(p.peak_index(), 5000u);
    EXPECT_GT(p.energy(), 0.0);
    EXPECT_NEAR(p.intensity_fwhm(), 1e-6, 2e-9);
}

TEST(GaussianPulse, RejectsPulseLeavingGrid)
{
    const TimeGrid g(1 << 12, 1e-9);
    EXPECT_THROW(gaussian_pulse(g, 1e-6, 1e-6, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(gaussian_pulse(g, 4e-6, 1e-6, 0.0, 1.0), std::invalid_argument);
}

TEST(GaussianPulse, TimeBandwidthProduct)
{
    // Transform-limited gaussian: FWHM_t * FWHM_f = 2 ln2 / pi for intensities.
    const TimeGrid g(1 << 18, 4e-9);
    const auto p = gaussian_pulse(g, 100e-6, 1e-6, 0.0, 1.0);
    const auto s = to_spectrum(p);
    EXPECT_NEAR(s.intensity_fwhm(), 2.0 * std::log(2.0) / kPi / 1e-6, 0.01 * 441e3);
}

TEST(Spectrum, DetuningMovesPeak)
{
    const TimeGrid g(1 << 16, 4e-9);
    const auto p = gaussian_pulse(g, 50e-6, 2e-6, 3e6, 1.0);
    const auto s = to_spectrum(p);
    EXPECT_NEAR(s.frequency(s.peak_bin()), 3e6, s.df());
    EXPECT_EQ(s.bin_of(0.0), s.size() / 2);
}

TEST(Spectrum, Parseval)
{
    const TimeGrid g(1 << 12, 3e-9);
    ComplexEnvelope e(g, random_samples(g.size(), 3));
    const auto s = to_spectrum(e);
    EXPECT_NEAR(s.energy(), e.energy(), 1e-10 * e.energy());
}

TEST(Spectrum, RoundTrip)
{
    const TimeGrid g(1 << 10, 1e-9);
    ComplexEnvelope e(g, random_samples(g.size(), 4));
    const auto back = to_time(to_spectrum(e), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(std::abs(back.samples()[k] - e.samples()[k]), 0.0, 1e-12);
    }
}

TEST(Spectrum, Linearity)
{
    const TimeGrid g(1 << 10, 1e-9);
    ComplexEnvelope a(g, random_samples(g.size(), 5));
    ComplexEnvelope b(g, random_samples(g.size(), 6));
    const cplx alpha(0.3, -1.2);
    std::vector<cplx> mix(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        mix[k] = alpha * a.samples()[k] + b.samples()[k];
    }
    const auto sm = to_spectrum(ComplexEnvelope(g, mix));
    const auto sa = to_spectrum(a);
    const auto sb = to_spectrum(b);
    for (std::size_t m = 0; m < g.size(); ++m) {
        EXPECT_NEAR(std::abs(sm.bins()[m] - (alpha * sa.bins()[m] + sb.bins()[m])), 0.0, 1e-12);
    }
}

TEST(Spectrum, ShiftTheorem)
{
    const TimeGrid g(1 << 10, 1e-9);
    ComplexEnvelope a(g, random_samples(g.size(), 8));
    const std::ptrdiff_t shift = 37;
    const auto sa = to_spectrum(a);
    const auto ss = to_spectrum(a.shifted(shift));
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double f = sa.frequency(m);
        const cplx phase = std::polar(1.0, -2.0 * kPi * f * static_cast<double>(shift) * g.dt());
        EXPECT_NEAR(std::abs(ss.bins()[m] - phase * sa.bins()[m]), 0.0, 1e-12);
    }
}

TEST(Spectrum, GridMismatchRejected)
{
    const TimeGrid g(1 << 10, 1e-9);
    const auto s = to_spectrum(ComplexEnvelope(g, random_samples(g.size(), 9)));
    EXPECT_THROW(to_time(s, TimeGrid(1 << 11, 1e-9)), std::invalid_argument);
    EXPECT_THROW(to_time(s, TimeGrid(1 << 10, 2e-9)), std::invalid_argument);
}

TEST(Spectrum, OrderConversionsInvert)
{
    const auto x = random_samples(16, 10);
    const auto c = fft_to_centered_order(x);
    EXPECT_EQ(c[8], x[0]);
    const auto back = centered_to_fft_order(c);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_EQ(back[i], x[i]);
    }
}

TEST(Envelope, WindowedEnergyAndCentroid)
{
    const TimeGrid g(1 << 14, 1e-9);
    const auto p = gaussian_pulse(g, 6e-6, 1e-6, 0.0, 2.0);
    EXPECT_NEAR(p.centroid(), 6e-6, 1e-12);
    EXPECT_NEAR(p.energy_between(0.0, g.span()), p.energy(), 1e-12 * p.energy());
    EXPECT_NEAR(p.energy_between(0.0, 6e-6) / p.energy(), 0.5, 1e-3);
    EXPECT_NEAR(p.scaled(3.0).energy(), 9.0 * p.energy(), 1e-9 * p.energy());
}

TEST(Envelope, BinaryRoundTrip)
{
    const TimeGrid g(1 << 8, 2.5e-9);
    ComplexEnvelope e(g, random_samples(g.size(), 11), 1.5e6);
    std::stringstream buf;
    write_binary(buf, e);
    const auto back = read_binary(buf);
    EXPECT_EQ(back.grid(), g);
    EXPECT_EQ(back.carrier_detuning(), 1.5e6);
    EXPECT_EQ(back.samples(), e.samples());

    std::stringstream bad("NOTANENV");
    EXPECT_THROW(read_binary(bad), std::runtime_error);
}
