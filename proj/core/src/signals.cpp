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

#include "afcmem/signals.hpp"

#include "afcmem/csv.hpp"
#include "afcmem/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace afc {

TimeGrid::TimeGrid(std::size_t n_samples, double dt) : n_(n_samples), dt_(dt)
{
    if (n_samples < 2 || !std::has_single_bit(n_samples)) {
        throw std::invalid_argument("TimeGrid: n_samples must be a power of two >= 2, got " +
                                    std::to_string(n_samples));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("TimeGrid: dt must be positive and finite");
    }
}

ComplexEnvelope::ComplexEnvelope(TimeGrid grid, std::vector<cplx> samples, double carrier_detuning)
    : grid_(grid), samples_(std::move(samples)), carrier_detuning_(carrier_detuning)
{
    if (samples_.size() != grid_.size()) {
        throw std::invalid_argument("ComplexEnvelope: sample count does not match grid");
    }
    for (const auto &s : samples_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw std::invalid_argument("ComplexEnvelope: non-finite sample");
        }
    }
}

ComplexEnvelope::ComplexEnvelope(TimeGrid grid, double carrier_detuning)
    : grid_(grid), samples_(grid.size()), carrier_detuning_(carrier_detuning)
{
}

double ComplexEnvelope::energy() const
{
    double sum = 0.0;
    for (const auto &s : samples_) {
        sum += std::norm(s);
    }
    return sum * grid_.dt();
}

namespace {

std::pair<std::size_t, std::size_t> index_range(const TimeGrid &grid, double t0, double t1)
{
    const double n = static_cast<double>(grid.size());
    const double lo = std::clamp(std::ceil(t0 / grid.dt()), 0.0, n);
    const double hi = std::clamp(std::ceil(t1 / grid.dt()), 0.0, n);
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(std::max(lo, hi))};
}

} // namespace

double ComplexEnvelope::energy_between(double t0, double t1) const
{
    auto [lo, hi] = index_range(grid_, t0, t1);
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        sum += std::norm(samples_[k]);
    }
    return sum * grid_.dt();
}

double ComplexEnvelope::centroid_between(double t0, double t1) const
{
    auto [lo, hi] = index_range(grid_, t0, t1);
    double w = 0.0;
    double wt = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double p = std::norm(samples_[k]);
        w += p;
        wt += p * grid_.time(k);
    }
    if (w <= 0.0) {
        throw std::domain_error("centroid of an empty window");
    }
    return wt / w;
}

double ComplexEnvelope::centroid() const { return centroid_between(0.0, grid_.span()); }

std::size_t ComplexEnvelope::peak_index() const
{
    auto it = std::max_element(samples_.begin(), samples_.end(),
                               [](const cplx &a, const cplx &b) { return std::norm(a) < std::norm(b); });
    return static_cast<std::size_t>(std::distance(samples_.begin(), it));
}

namespace {

// Width at half maximum around the peak of a sampled non-negative curve, in samples.
double half_max_width(const std::vector<double> &y, std::size_t peak)
{
    const double half = 0.5 * y[peak];
    if (half <= 0.0) {
        return 0.0;
    }
    std::size_t lo = peak;
    while (lo > 0 && y[lo - 1] > half) {
        --lo;
    }
    std::size_t hi = peak;
    while (hi + 1 < y.size() && y[hi + 1] > half) {
        ++hi;
    }
    double left = static_cast<double>(lo);
    if (lo > 0) {
        left -= (y[lo] - half) / (y[lo] - y[lo - 1]);
    }
    double right = static_cast<double>(hi);
    if (hi + 1 < y.size()) {
        right += (y[hi] - half) / (y[hi] - y[hi + 1]);
    }
    return right - left;
}

} // namespace

double ComplexEnvelope::intensity_fwhm() const
{
    std::vector<double> y(samples_.size());
    std::transform(samples_.begin(), samples_.end(), y.begin(), [](const cplx &s) { return std::norm(s); });
    return half_max_width(y, peak_index()) * grid_.dt();
}

ComplexEnvelope ComplexEnvelope::scaled(cplx factor) const
{
    ComplexEnvelope out = *this;
    for (auto &s : out.samples_) {
        s *= factor;
    }
    return out;
}

ComplexEnvelope ComplexEnvelope::shifted(std::ptrdiff_t k) const
{
    const auto n = static_cast<std::ptrdiff_t>(samples_.size());
    const std::ptrdiff_t shift = ((k % n) + n) % n;
    ComplexEnvelope out = *this;
    std::rotate_copy(samples_.begin(), samples_.end() - shift, samples_.end(), out.samples_.begin());
    return out;
}

Spectrum::Spectrum(double df, std::vector<cplx> bins) : df_(df), bins_(std::move(bins))
{
    if (!(df > 0.0)) {
        throw std::invalid_argument("Spectrum: df must be positive");
    }
    if (!std::has_single_bit(bins_.size())) {
        throw std::invalid_argument("Spectrum: bin count must be a power of two");
    }
}

double Spectrum::frequency(std::size_t m) const
{
    return (static_cast<double>(m) - static_cast<double>(bins_.size() / 2)) * df_;
}

std::size_t Spectrum::bin_of(double f) const
{
    const double m = std::round(f / df_) + static_cast<double>(bins_.size() / 2);
    return static_cast<std::size_t>(std::clamp(m, 0.0, static_cast<double>(bins_.size() - 1)));
}

double Spectrum::energy() const
{
    double sum = 0.0;
    for (const auto &b : bins_) {
        sum += std::norm(b);
    }
    return sum * df_;
}

double Spectrum::energy_between(double f0, double f1) const
{
    double sum = 0.0;
    for (std::size_t m = 0; m < bins_.size(); ++m) {
        const double f = frequency(m);
        if (f >= f0 && f <= f1) {
            sum += std::norm(bins_[m]);
        }
    }
    return sum * df_;
}

std::size_t Spectrum::peak_bin() const
{
    auto it = std::max_element(bins_.begin(), bins_.end(),
                               [](const cplx &a, const cplx &b) { return std::norm(a) < std::norm(b); });
    return static_cast<std::size_t>(std::distance(bins_.begin(), it));
}

double Spectrum::intensity_fwhm() const
{
    std::vector<double> y(bins_.size());
    std::transform(bins_.begin(), bins_.end(), y.begin(), [](const cplx &s) { return std::norm(s); });
    return half_max_width(y, peak_bin()) * df_;
}

namespace {

void check_inside(const TimeGrid &grid, double lo, double hi)
{
    if (lo < 0.0 || hi > grid.span()) {
        throw std::invalid_argument("pulse outside grid: needs [" + csv::format_double(lo) + ", " +
                                    csv::format_double(hi) + "] s inside [0, " +
                                    csv::format_double(grid.span()) + "] s");
    }
}

} // namespace

ComplexEnvelope gaussian_pulse(const TimeGrid &grid, double center, double fwhm, double detuning,
                               double amplitude)
{
    if (!(fwhm > 0.0)) {
        throw std::invalid_argument("gaussian_pulse: fwhm must be positive");
    }
    check_inside(grid, center - 3.0 * fwhm, center + 3.0 * fwhm);
    std::vector<cplx> s(grid.size());
    const double a = 4.0 * std::log(2.0) / (fwhm * fwhm);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double t = grid.time(k);
        const double mag = amplitude * std::exp(-0.5 * a * (t - center) * (t - center));
        s[k] = std::polar(mag, 2.0 * kPi * detuning * t);
    }
    return ComplexEnvelope(grid, std::move(s), detuning);
}

ComplexEnvelope square_pulse(const TimeGrid &grid, double center, double duration, double detuning,
                             double amplitude)
{
    if (!(duration > 0.0)) {
        throw std::invalid_argument("square_pulse: duration must be positive");
    }
    check_inside(grid, center - duration, center + duration);
    std::vector<cplx> s(grid.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double t = grid.time(k);
        if (std::abs(t - center) < 0.5 * duration) {
            s[k] = std::polar(amplitude, 2.0 * kPi * detuning * t);
        }
    }
    return ComplexEnvelope(grid, std::move(s), detuning);
}

std::vector<cplx> centered_to_fft_order(const std::vector<cplx> &centered)
{
    std::vector<cplx> out(centered.size());
    std::rotate_copy(centered.begin(), centered.begin() + static_cast<std::ptrdiff_t>(centered.size() / 2),
                     centered.end(), out.begin());
    return out;
}

std::vector<cplx> fft_to_centered_order(const std::vector<cplx> &fft_order)
{
    // n is even, so the half rotation is its own inverse.
    return centered_to_fft_order(fft_order);
}

Spectrum to_spectrum(const ComplexEnvelope &env)
{
    std::vector<cplx> buf = env.samples();
    fft_inplace(buf, FftDirection::Forward);
    const double dt = env.grid().dt();
    for (auto &b : buf) {
        b *= dt;
    }
    return Spectrum(env.grid().df(), fft_to_centered_order(buf));
}

ComplexEnvelope to_time(const Spectrum &spec, const TimeGrid &grid, double carrier_detuning)
{
    if (spec.size() != grid.size() || std::abs(spec.df() - grid.df()) > 1e-9 * grid.df()) {
        throw std::invalid_argument("to_time: spectrum does not match grid");
    }
    std::vector<cplx> buf = centered_to_fft_order(spec.bins());
    fft_inplace(buf, FftDirection::Inverse);
    const double df = spec.df();
    for (auto &b : buf) {
        b *= df;
    }
    return ComplexEnvelope(grid, std::move(buf), carrier_detuning);
}

void write_csv(std::ostream &out, const ComplexEnvelope &env)
{
    csv::Writer w(out, {"time_s", "re", "im"});
    const auto &s = env.samples();
    for (std::size_t k = 0; k < s.size(); ++k) {
        w.row({env.grid().time(k), s[k].real(), s[k].imag()});
    }
}

void write_csv(std::ostream &out, const Spectrum &spec)
{
    csv::Writer w(out, {"freq_Hz", "re", "im"});
    const auto &b = spec.bins();
    for (std::size_t m = 0; m < b.size(); ++m) {
        w.row({spec.frequency(m), b[m].real(), b[m].imag()});
    }
}

namespace {

constexpr char kMagic[8] = {'A', 'F', 'C', 'E', 'N', 'V', '1', '\0'};

template <typename T> void put_le(std::ostream &out, T value)
{
    static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T> T get_le(std::istream &in)
{
    T value{};
    in.read(reinterpret_cast<char *>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error("read_binary: truncated input");
    }
    return value;
}

} // namespace

void write_binary(std::ostream &out, const ComplexEnvelope &env)
{
    out.write(kMagic, sizeof(kMagic));
    put_le<std::uint64_t>(out, env.grid().size());
    put_le<double>(out, env.grid().dt());
    put_le<double>(out, env.carrier_detuning());
    for (const auto &s : env.samples()) {
        put_le<double>(out, s.real());
        put_le<double>(out, s.imag());
    }
}

ComplexEnvelope read_binary(std::istream &in)
{
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("read_binary: bad magic");
    }
    const auto n = get_le<std::uint64_t>(in);
    const auto dt = get_le<double>(in);
    const auto detuning = get_le<double>(in);
    TimeGrid grid(static_cast<std::size_t>(n), dt);
    std::vector<cplx> s(grid.size());
    for (auto &v : s) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        v = {re, im};
    }
    return ComplexEnvelope(grid, std::move(s), detuning);
}

} // namespace afc
