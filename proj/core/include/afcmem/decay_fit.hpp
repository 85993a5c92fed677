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

#include <string>
#include <vector>

namespace afc {

struct DecayPoint {
    double tau;
    double efficiency;
};

/// eta(tau) = eta0 * exp(-tau / tau_1e), fitted by least squares on log(eta).
struct DecayFit {
    double eta0 = 0.0;
    double tau_1e = 0.0;
    double eta0_std_error = 0.0;
    double tau_1e_std_error = 0.0;
    /// RMS of the log-space residuals.
    double residual_rms = 0.0;
    std::size_t n_points = 0;
};

/// Needs >= 3 points with efficiency > 0 and a decaying trend.
DecayFit fit_exponential_decay(const std::vector<DecayPoint> &points);

/// Relative two-pulse photon echo intensity exp(-2 (2 t12 / t2)^x); x = 1 gives exp(-4 t12 / t2).
double two_pulse_echo_intensity(double t12, double t2, double stretch = 1.0);

struct EchoSample {
    double t12;
    double intensity;
};

struct EchoFit {
    double amplitude = 0.0;
    double t2 = 0.0;
    double stretch = 1.0;
    double amplitude_std_error = 0.0;
    double t2_std_error = 0.0;
    double stretch_std_error = 0.0;
    double residual_rms = 0.0;
};

/// Fits amplitude * exp(-2 (2 t12 / t2)^x). With fit_stretch == false, x is held at 1 and the
/// fit is the closed-form log-linear one; otherwise Levenberg-Marquardt on the linear residuals.
EchoFit fit_two_pulse_echo(const std::vector<EchoSample> &samples, bool fit_stretch = false);

/// Tabulated T2 versus magnetic field (ingested data), linearly interpolated.
class T2FieldTable {
  public:
    T2FieldTable(std::vector<double> field_gauss, std::vector<double> t2_s);
    /// CSV with columns field_G, t2_s.
    static T2FieldTable from_csv(const std::string &path);

    /// Throws std::out_of_range outside the tabulated field range.
    double t2_at(double field_gauss) const;
    double field_of_max_t2() const;

  private:
    std::vector<double> field_;
    std::vector<double> t2_;
};

} // namespace afc
