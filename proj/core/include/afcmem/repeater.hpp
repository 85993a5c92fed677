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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace afc {

enum class TrainState { Optical, Spin, Reemitted, Corrupted };
enum class PulseDirection { Down, Up };

std::string to_string(TrainState s);
std::string to_string(PulseDirection d);
PulseDirection pulse_direction_from_string(const std::string &name);

struct QubitTrain {
    std::string id;
    double arrival_time = 0.0;
    int n_modes = 1;
    double mode_duration = 1e-6;
    TrainState state = TrainState::Optical;
};

/// Control pi-pulse on the excited/spin transition. It acts on every stored train; `target`
/// names the train it is meant for. Without a target, a Down pulse is meant for the trains
/// currently in optical coherence and an Up pulse for the trains in spin coherence.
struct ControlPulse {
    double time = 0.0;
    PulseDirection direction = PulseDirection::Down;
    std::optional<std::string> target;
};

enum class EventKind { Absorbed, PulseApplied, MappedToSpin, MappedToOptical, Reemitted };
std::string to_string(EventKind k);

struct ScheduleEvent {
    double time;
    EventKind kind;
    std::string train;
    /// -1 when not caused by a pulse.
    int pulse_index;
    bool forced;
};

struct Conflict {
    std::string train;
    std::size_t pulse_index;
    double pulse_time;
    std::string intended_for;
    double forced_reemission_time;
};

struct ScheduleResult {
    std::vector<ScheduleEvent> log;
    std::vector<Conflict> conflicts;
    /// Final states; Reemitted or Corrupted once the train has left the memory.
    std::vector<QubitTrain> trains;
    /// Time each train left the memory (NaN while still stored).
    std::vector<double> reemission_times;

    std::size_t corrupted_count() const;
};

/// Discrete-event memory timeline. A train accumulates optical (rephasing) time only while it is in
/// optical coherence and is re-emitted once that reaches optical_storage_time. Every pulse toggles
/// every stored train between optical and spin coherence; a train sent back to optical coherence by
/// a pulse meant for another train is corrupted. At equal times re-emissions precede arrivals,
/// which precede pulses.
ScheduleResult simulate_spinwave_schedule(const std::vector<QubitTrain> &trains,
                                          const std::vector<ControlPulse> &pulses, double optical_storage_time);

void write_event_log_csv(std::ostream &out, const ScheduleResult &result);

/// floor(optical_storage_time / mode_duration); 0 when the mode is longer than the storage time.
long long max_conflict_free_block(double optical_storage_time, double mode_duration);

enum class RepeaterProtocol { TwoLevelAfc, SpinWave };
std::string to_string(RepeaterProtocol p);
RepeaterProtocol repeater_protocol_from_string(const std::string &name);

struct RepeaterConfig {
    double optical_storage_time = 100e-6;
    double mode_duration = 1e-6;
    long long n_spectral_channels = 1;
    double per_mode_success_probability = 0.01;
    double attempt_cycle = 1e-3;
    RepeaterProtocol protocol = RepeaterProtocol::TwoLevelAfc;
    /// Spin-wave only: time from the end of a train's absorption window until its down-pulse has
    /// completed. The down-pulse must complete before the first mode rephases, so this time is
    /// unavailable for absorption within the optical storage block.
    double spin_dead_time = 0.0;

    void validate() const;
};

/// Mode-slot schedule of one block: which slots can absorb a qubit.
struct BlockSchedule {
    long long block_slots = 0;
    long long usable_slots = 0;
    double dead_time_fraction() const;
};

BlockSchedule simulate_block_schedule(const RepeaterConfig &cfg);

struct RateEstimate {
    double analytic_rate = 0.0;
    double monte_carlo_rate = 0.0;
    double monte_carlo_std_error = 0.0;
    double effective_modes = 0.0;
    double dead_time_fraction = 0.0;
    long long cycles = 0;
};

/// analytic = M_eff * p / attempt_cycle with M_eff = usable slots * channels; Monte Carlo draws the
/// successes of every attempt cycle.
RateEstimate entanglement_rate(const RepeaterConfig &cfg, std::uint64_t seed, long long n_cycles = 100000);

} // namespace afc
