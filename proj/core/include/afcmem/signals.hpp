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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace afc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform sampling grid t_k = k * dt, k = 0 .. n_samples-1.
/// The sample count is a power of two.
class TimeGrid {
  public:
    TimeGrid(std::size_t n_samples, double dt);

    std::size_t size() const { return n_; }
    double dt() const { return dt_; }
    double span() const { return static_cast<double>(n_) * dt_; }
    double time(std::size_t k) const { return static_cast<double>(k) * dt_; }
    /// Frequency resolution of the matching spectrum, 1 / span.
    double df() const { return 1.0 / span(); }
    double nyquist() const { return 0.5 / dt_; }

    bool operator==(const TimeGrid &) const = default;

  private:
    std::size_t n_;
    double dt_;
};

/// Complex field envelope on a TimeGrid. Carrier factored out; energy = sum |a|^2 dt.
class ComplexEnvelope {
  public:
    ComplexEnvelope(TimeGrid grid, std::vector<cplx> samples, double carrier_detuning = 0.0);
    /// All-zero envelope.
    explicit ComplexEnvelope(TimeGrid grid, double carrier_detuning = 0.0);

    const TimeGrid &grid() const { return grid_; }
    const std::vector<cplx> &samples() const { return samples_; }
    std::vector<cplx> &samples() { return samples_; }
    double carrier_detuning() const { return carrier_detuning_; }

    double energy() const;
    /// Energy in [t0, t1) with t measured on the (non-wrapping) grid.
    double energy_between(double t0, double t1) const;
    /// Energy-weighted mean time over [t0, t1).
    double centroid_between(double t0, double t1) const;
    /// Energy-weighted mean time over the whole grid.
    double centroid() const;
    /// Intensity full width at half maximum, linearly interpolated between samples.
    double intensity_fwhm() const;
    std::size_t peak_index() const;

    ComplexEnvelope scaled(cplx factor) const;
    /// Circular shift by k samples (positive = later).
    ComplexEnvelope shifted(std::ptrdiff_t k) const;

  private:
    TimeGrid grid_;
    std::vector<cplx> samples_;
    double carrier_detuning_;
};

/// Spectrum A(f) = dt * sum_k a_k exp(-i 2 pi f t_k) with bins centred on the reference
/// frequency: bin m holds f = (m - n/2) * df.
class Spectrum {
  public:
    Spectrum(double df, std::vector<cplx> bins);

    double df() const { return df_; }
    std::size_t size() const { return bins_.size(); }
    const std::vector<cplx> &bins() const { return bins_; }
    std::vector<cplx> &bins() { return bins_; }
    double frequency(std::size_t m) const;
    /// Nearest bin to frequency f (clamped).
    std::size_t bin_of(double f) const;

    double energy() const;
    double energy_between(double f0, double f1) const;
    std::size_t peak_bin() const;
    /// Full width at half maximum of |A|^2.
    double intensity_fwhm() const;

  private:
    double df_;
    std::vector<cplx> bins_;
};

/// Gaussian intensity profile exp(-4 ln2 ((t-center)/fwhm)^2) with phase ramp exp(i 2 pi detuning t).
/// Throws std::invalid_argument when center +/- 3 fwhm leaves the grid.
ComplexEnvelope gaussian_pulse(const TimeGrid &grid, double center, double fwhm, double detuning,
                               double amplitude);

/// Flat-top pulse of the given duration, for sensitivity studies.
ComplexEnvelope square_pulse(const TimeGrid &grid, double center, double duration, double detuning,
                             double amplitude);

Spectrum to_spectrum(const ComplexEnvelope &env);
ComplexEnvelope to_time(const Spectrum &spec, const TimeGrid &grid, double carrier_detuning = 0.0);

/// Reorder between centred (DC at n/2) and FFT (DC at 0) bin order.
std::vector<cplx> centered_to_fft_order(const std::vector<cplx> &centered);
std::vector<cplx> fft_to_centered_order(const std::vector<cplx> &fft_order);

void write_csv(std::ostream &out, const ComplexEnvelope &env);
void write_csv(std::ostream &out, const Spectrum &spec);

/// Little-endian binary dump: "AFCENV1\0", u64 n, f64 dt, f64 carrier_detuning, then n (re, im) f64 pairs.
void write_binary(std::ostream &out, const ComplexEnvelope &env);
ComplexEnvelope read_binary(std::istream &in);

} // namespace afc
