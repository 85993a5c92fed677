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

#include "afcmem/quantumstats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace afc {

void PairSourceModel::validate() const
{
    auto prob = [](double v, const char *name, bool allow_zero) {
        if (!(v <= 1.0) || !(allow_zero ? v >= 0.0 : v > 0.0)) {
            throw std::invalid_argument(std::string("pair source: ") + name +
                                        (allow_zero ? " must be in [0, 1]" : " must be in (0, 1]"));
        }
    };
    if (!(mean_pairs_per_window > 0.0) || !std::isfinite(mean_pairs_per_window)) {
        throw std::invalid_argument("pair source: mean_pairs_per_window must be > 0");
    }
    prob(herald_efficiency, "herald_efficiency", false);
    prob(signal_efficiency, "signal_efficiency", false);
    prob(dark_prob_herald, "dark_prob_herald", true);
    prob(dark_prob_signal, "dark_prob_signal", true);
}

CoincidenceCounts &CoincidenceCounts::operator+=(const CoincidenceCounts &o)
{
    n_windows += o.n_windows;
    singles_herald += o.singles_herald;
    singles_signal += o.singles_signal;
    coincidences += o.coincidences;
    return *this;
}

ClickProbabilities click_probabilities(const PairSourceModel &m)
{
    m.validate();
    // For thermal n, E[x^n] = 1 / (1 + mu (1 - x)).
    const double mu = m.mean_pairs_per_window;
    const double eh = m.herald_efficiency;
    const double es = m.signal_efficiency;
    const double qh = 1.0 - m.dark_prob_herald;
    const double qs = 1.0 - m.dark_prob_signal;
    const double no_h = qh / (1.0 + mu * eh);
    const double no_s = qs / (1.0 + mu * es);
    const double neither = qh * qs / (1.0 + mu * (1.0 - (1.0 - eh) * (1.0 - es)));
    ClickProbabilities p;
    p.herald = 1.0 - no_h;
    p.signal = 1.0 - no_s;
    p.coincidence = 1.0 - no_h - no_s + neither;
    return p;
}

double expected_g2(const PairSourceModel &m)
{
    const auto p = click_probabilities(m);
    return p.coincidence / (p.herald * p.signal);
}

namespace {

CoincidenceCounts simulate_batch(const PairSourceModel &m, long long n, std::uint64_t seed, std::uint64_t batch)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    const double mu = m.mean_pairs_per_window;
    const double log_ratio = std::log(mu / (1.0 + mu));
    const double log_miss_h = std::log1p(-m.herald_efficiency);
    const double log_miss_s = std::log1p(-m.signal_efficiency);

    CoincidenceCounts c;
    c.n_windows = n;
    for (long long w = 0; w < n; ++w) {
        // Geometric (thermal) pair number by inversion; 1 - U lies in (0, 1].
        const double pairs = std::floor(std::log(1.0 - u(rng)) / log_ratio);
        bool h = u(rng) < m.dark_prob_herald;
        bool s = u(rng) < m.dark_prob_signal;
        if (pairs > 0.0) {
            const double ph = m.herald_efficiency >= 1.0 ? 1.0 : -std::expm1(pairs * log_miss_h);
            const double ps = m.signal_efficiency >= 1.0 ? 1.0 : -std::expm1(pairs * log_miss_s);
            h = (u(rng) < ph) || h;
            s = (u(rng) < ps) || s;
        }
        c.singles_herald += h;
        c.singles_signal += s;
        c.coincidences += h && s;
    }
    return c;
}

} // namespace

CoincidenceCounts simulate_counts(const PairSourceModel &m, long long n_windows, std::uint64_t seed, unsigned threads)
{
    m.validate();
    if (n_windows < kMinWindows) {
        throw std::invalid_argument("simulate_counts: n_windows must be >= " + std::to_string(kMinWindows));
    }
    const long long n_batches = (n_windows + kBatchWindows - 1) / kBatchWindows;
    std::vector<CoincidenceCounts> parts(static_cast<std::size_t>(n_batches));
    auto run = [&](long long b) {
        const long long n = std::min(kBatchWindows, n_windows - b * kBatchWindows);
        parts[static_cast<std::size_t>(b)] = simulate_batch(m, n, seed, static_cast<std::uint64_t>(b));
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(threads == 0 ? 1u : threads, static_cast<unsigned>(n_batches)));
    if (n_threads == 1) {
        for (long long b = 0; b < n_batches; ++b) {
            run(b);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (long long b = t; b < n_batches; b += n_threads) {
                    run(b);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    CoincidenceCounts total;
    for (const auto &p : parts) {
        total += p;
    }
    return total;
}

G2Estimate g2_from_counts(const CoincidenceCounts &c)
{
    if (c.singles_herald <= 0 || c.singles_signal <= 0) {
        throw std::invalid_argument("g2_from_counts: herald and signal singles must be > 0");
    }
    if (c.n_windows <= 0 || c.coincidences < 0 || c.coincidences > std::min(c.singles_herald, c.singles_signal) ||
        std::max(c.singles_herald, c.singles_signal) > c.n_windows) {
        throw std::invalid_argument("g2_from_counts: inconsistent counts");
    }
    const double n = static_cast<double>(c.n_windows);
    const double h = static_cast<double>(c.singles_herald);
    const double s = static_cast<double>(c.singles_signal);
    const double k = static_cast<double>(c.coincidences);
    G2Estimate e;
    e.g2 = k * n / (h * s);
    if (c.coincidences > 0) {
        const double rel2 = (1.0 - k / n) / k + (1.0 - h / n) / h + (1.0 - s / n) / s;
        e.std_error = e.g2 * std::sqrt(rel2);
    } else {
        // No coincidences: report the scale of a single event.
        e.std_error = n / (h * s);
    }
    return e;
}

bool classicality_check(double g2)
{
    if (!(g2 >= 0.0)) {
        throw std::invalid_argument("classicality_check: g2 must be >= 0");
    }
    return g2 > 2.0;
}

PairSourceModel with_memory(const PairSourceModel &m, double memory_efficiency, double added_signal_background)
{
    if (!(memory_efficiency > 0.0 && memory_efficiency <= 1.0)) {
        throw std::invalid_argument("with_memory: memory efficiency must be in (0, 1]");
    }
    if (!(added_signal_background >= 0.0 && added_signal_background <= 1.0)) {
        throw std::invalid_argument("with_memory: added background must be in [0, 1]");
    }
    PairSourceModel out = m;
    out.signal_efficiency *= memory_efficiency;
    out.dark_prob_signal = 1.0 - (1.0 - m.dark_prob_signal) * (1.0 - added_signal_background);
    out.validate();
    return out;
}

namespace {

template <class F> double bisect(F f, double lo, double hi)
{
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double solve_mean_pairs_for_g2(const PairSourceModel &m, double target_g2)
{
    auto g2_at = [&](double mu) {
        PairSourceModel c = m;
        c.mean_pairs_per_window = mu;
        return expected_g2(c);
    };
    // g2 rises from 1 (darks dominate) to a maximum, then falls towards 1 as mu grows.
    const double lmin = std::log(1e-12);
    const double lmax = std::log(1e4);
    double a = lmin;
    double b = lmax;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 300; ++i) {
        const double x1 = b - r * (b - a);
        const double x2 = a + r * (b - a);
        if (g2_at(std::exp(x1)) < g2_at(std::exp(x2))) {
            a = x1;
        } else {
            b = x2;
        }
    }
    const double peak = 0.5 * (a + b);
    if (!(g2_at(std::exp(peak)) > target_g2) || !(g2_at(std::exp(lmax)) < target_g2)) {
        throw std::invalid_argument("solve_mean_pairs_for_g2: target g2 not reachable");
    }
    const double l = bisect([&](double x) { return g2_at(std::exp(x)) - target_g2; }, peak, lmax);
    return std::exp(l);
}

double solve_signal_background_for_g2(const PairSourceModel &m, double target_g2)
{
    auto g2_at = [&](double bg) { return expected_g2(with_memory(m, 1.0, bg)); };
    if (!(g2_at(0.0) > target_g2) || !(g2_at(1.0) < target_g2)) {
        throw std::invalid_argument("solve_signal_background_for_g2: target g2 not reachable");
    }
    return bisect([&](double bg) { return g2_at(bg) - target_g2; }, 0.0, 1.0);
}

} // namespace afc
