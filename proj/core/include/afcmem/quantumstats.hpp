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

#include <cstdint>

namespace afc {

/// Thermal photon-pair source with threshold detectors on the herald and signal arms.
struct PairSourceModel {
    double mean_pairs_per_window = 0.05;
    double herald_efficiency = 0.25;
    double signal_efficiency = 0.25;
    double dark_prob_herald = 0.0;
    double dark_prob_signal = 0.0;

    void validate() const;
};

struct CoincidenceCounts {
    long long n_windows = 0;
    long long singles_herald = 0;
    long long singles_signal = 0;
    long long coincidences = 0;

    CoincidenceCounts &operator+=(const CoincidenceCounts &o);
};

/// Per-window click probabilities of the model (exact for thermal statistics).
struct ClickProbabilities {
    double herald = 0.0;
    double signal = 0.0;
    double coincidence = 0.0;
};

ClickProbabilities click_probabilities(const PairSourceModel &m);
double expected_g2(const PairSourceModel &m);

/// Windows are simulated in fixed batches of kBatchWindows, each with its own generator derived
/// from (seed, batch index), so the result does not depend on the thread count.
inline constexpr long long kBatchWindows = 1 << 20;
inline constexpr long long kMinWindows = 10000;

CoincidenceCounts simulate_counts(const PairSourceModel &m, long long n_windows, std::uint64_t seed,
                                  unsigned threads = 1);

struct G2Estimate {
    double g2 = 0.0;
    double std_error = 0.0;
};

G2Estimate g2_from_counts(const CoincidenceCounts &c);

/// Strictly above the classical bound of 2.
bool classicality_check(double g2);

/// Signal arm after storage: efficiency scaled by the memory efficiency, plus an independent
/// background click probability added by the memory.
PairSourceModel with_memory(const PairSourceModel &m, double memory_efficiency, double added_signal_background);

/// Mean pair number on the high-brightness branch (where g2 falls with mu) giving the target g2.
double solve_mean_pairs_for_g2(const PairSourceModel &m, double target_g2);

/// Added signal background that brings the expected g2 of `m` down to the target.
double solve_signal_background_for_g2(const PairSourceModel &m, double target_g2);

} // namespace afc
