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

#include "afcmem/decay_fit.hpp"

#include "afcmem/csv.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace afc {
namespace {

struct LineFit {
    double intercept;
    double slope;
    double intercept_se;
    double slope_se;
    double rms;
};

LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y)
{
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit: abscissae must not all be equal");
    }
    LineFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    const double sigma2 = n > 2.0 ? rss / (n - 2.0) : 0.0;
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));
    fit.rms = std::sqrt(rss / n);
    return fit;
}

} // namespace

DecayFit fit_exponential_decay(const std::vector<DecayPoint> &points)
{
    if (points.size() < 3) {
        throw std::invalid_argument("fit_exponential_decay: need at least 3 points");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto &p : points) {
        if (!(p.efficiency > 0.0) || !std::isfinite(p.efficiency)) {
            throw std::invalid_argument("fit_exponential_decay: efficiency must be > 0 (tau = " +
                                        csv::format_double(p.tau) + " s)");
        }
        x.push_back(p.tau);
        y.push_back(std::log(p.efficiency));
    }
    const LineFit line = fit_line(x, y);
    if (!(line.slope < 0.0)) {
        throw std::invalid_argument("fit_exponential_decay: data do not decay");
    }
    DecayFit fit;
    fit.eta0 = std::exp(line.intercept);
    fit.tau_1e = -1.0 / line.slope;
    fit.eta0_std_error = fit.eta0 * line.intercept_se;
    fit.tau_1e_std_error = line.slope_se / (line.slope * line.slope);
    fit.residual_rms = line.rms;
    fit.n_points = points.size();
    return fit;
}

double two_pulse_echo_intensity(double t12, double t2, double stretch)
{
    if (t12 < 0.0) {
        throw std::invalid_argument("two_pulse_echo_intensity: t12 must be >= 0");
    }
    if (stretch == 1.0) {
        return std::exp(-4.0 * t12 / t2);
    }
    return std::exp(-2.0 * std::pow(2.0 * t12 / t2, stretch));
}

namespace {

struct EchoFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<EchoSample> &samples;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(samples.size()); }

    // p = (amplitude, t2, stretch)
    int operator()(const Eigen::VectorXd &p, Eigen::VectorXd &r) const
    {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double u = 2.0 * samples[i].t12 / p[1];
            const double model = p[0] * std::exp(-2.0 * std::pow(std::max(u, 0.0), p[2]));
            r[static_cast<Eigen::Index>(i)] = model - samples[i].intensity;
        }
        return 0;
    }

    int df(const Eigen::VectorXd &p, Eigen::MatrixXd &j) const
    {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double u = 2.0 * samples[i].t12 / p[1];
            if (u <= 0.0) {
                j(row, 0) = 1.0;
                j(row, 1) = 0.0;
                j(row, 2) = 0.0;
                continue;
            }
            const double up = std::pow(u, p[2]);
            const double e = std::exp(-2.0 * up);
            j(row, 0) = e;
            j(row, 1) = p[0] * e * 2.0 * p[2] * up / p[1];
            j(row, 2) = -p[0] * e * 2.0 * up * std::log(u);
        }
        return 0;
    }
};

} // namespace

EchoFit fit_two_pulse_echo(const std::vector<EchoSample> &samples, bool fit_stretch)
{
    if (samples.size() < 3) {
        throw std::invalid_argument("fit_two_pulse_echo: need at least 3 samples");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto &s : samples) {
        if (!(s.intensity > 0.0) || s.t12 < 0.0) {
            throw std::invalid_argument("fit_two_pulse_echo: intensities must be > 0 and t12 >= 0");
        }
        x.push_back(s.t12);
        y.push_back(std::log(s.intensity));
    }
    const LineFit line = fit_line(x, y);
    if (!(line.slope < 0.0)) {
        throw std::invalid_argument("fit_two_pulse_echo: data do not decay");
    }
    EchoFit fit;
    fit.amplitude = std::exp(line.intercept);
    fit.t2 = -4.0 / line.slope;
    fit.amplitude_std_error = fit.amplitude * line.intercept_se;
    fit.t2_std_error = 4.0 * line.slope_se / (line.slope * line.slope);
    fit.residual_rms = line.rms;
    if (!fit_stretch) {
        return fit;
    }

    EchoFunctor functor{samples};
    Eigen::LevenbergMarquardt<EchoFunctor> lm(functor);
    Eigen::VectorXd p(3);
    p << fit.amplitude, fit.t2, 1.0;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-12;
    lm.parameters.maxfev = 2000;
    lm.minimize(p);

    Eigen::VectorXd r(functor.values());
    functor(p, r);
    Eigen::MatrixXd j(functor.values(), 3);
    functor.df(p, j);
    const double dof = std::max(1.0, static_cast<double>(samples.size()) - 3.0);
    const double sigma2 = r.squaredNorm() / dof;
    const Eigen::MatrixXd cov = sigma2 * (j.transpose() * j).inverse();
    fit.amplitude = p[0];
    fit.t2 = p[1];
    fit.stretch = p[2];
    fit.amplitude_std_error = std::sqrt(cov(0, 0));
    fit.t2_std_error = std::sqrt(cov(1, 1));
    fit.stretch_std_error = std::sqrt(cov(2, 2));
    fit.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(samples.size()));
    return fit;
}

T2FieldTable::T2FieldTable(std::vector<double> field_gauss, std::vector<double> t2_s)
    : field_(std::move(field_gauss)), t2_(std::move(t2_s))
{
    if (field_.size() != t2_.size() || field_.size() < 2) {
        throw std::invalid_argument("T2FieldTable: need >= 2 matching (field, t2) pairs");
    }
    std::vector<std::size_t> order(field_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [this](auto a, auto b) { return field_[a] < field_[b]; });
    std::vector<double> f;
    std::vector<double> t;
    for (auto i : order) {
        if (!(t2_[i] > 0.0)) {
            throw std::invalid_argument("T2FieldTable: t2 values must be > 0");
        }
        if (!f.empty() && field_[i] == f.back()) {
            throw std::invalid_argument("T2FieldTable: duplicate field value");
        }
        f.push_back(field_[i]);
        t.push_back(t2_[i]);
    }
    field_ = std::move(f);
    t2_ = std::move(t);
}

T2FieldTable T2FieldTable::from_csv(const std::string &path)
{
    const auto table = csv::read_numeric_file(path);
    const auto fc = table.column("field_G");
    const auto tc = table.column("t2_s");
    std::vector<double> f;
    std::vector<double> t;
    for (const auto &row : table.rows) {
        f.push_back(row[fc]);
        t.push_back(row[tc]);
    }
    return T2FieldTable(std::move(f), std::move(t));
}

double T2FieldTable::t2_at(double field_gauss) const
{
    if (field_gauss < field_.front() || field_gauss > field_.back()) {
        throw std::out_of_range("T2FieldTable: field " + csv::format_double(field_gauss) +
                                " G outside tabulated range");
    }
    auto it = std::upper_bound(field_.begin(), field_.end(), field_gauss);
    if (it == field_.end()) {
        return t2_.back();
    }
    const auto i = static_cast<std::size_t>(std::distance(field_.begin(), it));
    const double w = (field_gauss - field_[i - 1]) / (field_[i] - field_[i - 1]);
    return (1.0 - w) * t2_[i - 1] + w * t2_[i];
}

double T2FieldTable::field_of_max_t2() const
{
    auto it = std::max_element(t2_.begin(), t2_.end());
    return field_[static_cast<std::size_t>(std::distance(t2_.begin(), it))];
}

} // namespace afc
