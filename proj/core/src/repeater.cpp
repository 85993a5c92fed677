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

#include "afcmem/repeater.hpp"

#include "afcmem/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

namespace afc {

std::string to_string(TrainState s)
{
    switch (s) {
    case TrainState::Optical:
        return "optical";
    case TrainState::Spin:
        return "spin";
    case TrainState::Reemitted:
        return "reemitted";
    case TrainState::Corrupted:
        return "corrupted";
    }
    return "?";
}

std::string to_string(PulseDirection d) { return d == PulseDirection::Down ? "down" : "up"; }

PulseDirection pulse_direction_from_string(const std::string &name)
{
    if (name == "down") {
        return PulseDirection::Down;
    }
    if (name == "up") {
        return PulseDirection::Up;
    }
    throw std::invalid_argument("pulse direction must be 'down' or 'up', got '" + name + "'");
}

std::string to_string(EventKind k)
{
    switch (k) {
    case EventKind::Absorbed:
        return "absorbed";
    case EventKind::PulseApplied:
        return "pulse";
    case EventKind::MappedToSpin:
        return "to_spin";
    case EventKind::MappedToOptical:
        return "to_optical";
    case EventKind::Reemitted:
        return "reemitted";
    }
    return "?";
}

std::size_t ScheduleResult::corrupted_count() const
{
    std::set<std::string> ids;
    for (const auto &c : conflicts) {
        ids.insert(c.train);
    }
    return ids.size();
}

namespace {

enum class Domain { NotArrived, Optical, Spin, Gone };

// Lower rank runs first at equal times.
enum class QueueKind { Reemit = 0, Arrival = 1, Pulse = 2 };

struct QueuedEvent {
    double time;
    QueueKind kind;
    std::size_t seq;
    std::size_t index;
    std::size_t version;

    bool operator>(const QueuedEvent &o) const
    {
        if (time != o.time) {
            return time > o.time;
        }
        if (kind != o.kind) {
            return static_cast<int>(kind) > static_cast<int>(o.kind);
        }
        return seq > o.seq;
    }
};

struct TrainRuntime {
    Domain domain = Domain::NotArrived;
    double remaining = 0.0;
    double optical_since = 0.0;
    std::size_t version = 0;
    bool corrupted = false;
};

} // namespace

ScheduleResult simulate_spinwave_schedule(const std::vector<QubitTrain> &trains,
                                          const std::vector<ControlPulse> &pulses, double optical_storage_time)
{
    if (!(optical_storage_time > 0.0)) {
        throw std::invalid_argument("schedule: optical storage time must be > 0");
    }
    for (std::size_t i = 0; i < trains.size(); ++i) {
        if (trains[i].n_modes < 1 || !(trains[i].mode_duration > 0.0)) {
            throw std::invalid_argument("schedule: train '" + trains[i].id + "' needs n_modes >= 1 and mode_duration > 0");
        }
        if (i > 0 && trains[i].arrival_time < trains[i - 1].arrival_time) {
            throw std::invalid_argument("schedule: trains must be sorted by arrival time");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (trains[j].id == trains[i].id) {
                throw std::invalid_argument("schedule: duplicate train id '" + trains[i].id + "'");
            }
        }
    }
    for (std::size_t p = 1; p < pulses.size(); ++p) {
        if (!(pulses[p].time > pulses[p - 1].time)) {
            throw std::invalid_argument("schedule: control pulse times must be strictly increasing");
        }
    }

    ScheduleResult result;
    result.trains = trains;
    result.reemission_times.assign(trains.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<TrainRuntime> rt(trains.size());

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue;
    std::size_t seq = 0;
    for (std::size_t i = 0; i < trains.size(); ++i) {
        queue.push({trains[i].arrival_time, QueueKind::Arrival, seq++, i, 0});
    }
    for (std::size_t p = 0; p < pulses.size(); ++p) {
        queue.push({pulses[p].time, QueueKind::Pulse, seq++, p, 0});
    }

    auto schedule_reemit = [&](std::size_t i, double now) {
        queue.push({now + rt[i].remaining, QueueKind::Reemit, seq++, i, rt[i].version});
    };

    while (!queue.empty()) {
        const QueuedEvent ev = queue.top();
        queue.pop();
        switch (ev.kind) {
        case QueueKind::Arrival: {
            auto &t = rt[ev.index];
            t.domain = Domain::Optical;
            t.remaining = optical_storage_time;
            t.optical_since = ev.time;
            result.trains[ev.index].state = TrainState::Optical;
            result.log.push_back({ev.time, EventKind::Absorbed, trains[ev.index].id, -1, false});
            schedule_reemit(ev.index, ev.time);
            break;
        }
        case QueueKind::Reemit: {
            auto &t = rt[ev.index];
            if (t.domain != Domain::Optical || t.version != ev.version) {
                break;
            }
            t.domain = Domain::Gone;
            result.trains[ev.index].state = t.corrupted ? TrainState::Corrupted : TrainState::Reemitted;
            result.reemission_times[ev.index] = ev.time;
            result.log.push_back({ev.time, EventKind::Reemitted, trains[ev.index].id, -1, t.corrupted});
            break;
        }
        case QueueKind::Pulse: {
            const auto &pulse = pulses[ev.index];
            const int pidx = static_cast<int>(ev.index);
            result.log.push_back({ev.time, EventKind::PulseApplied, pulse.target.value_or(""), pidx, false});

            std::vector<bool> intended(trains.size(), false);
            std::string intended_label;
            if (pulse.target) {
                intended_label = *pulse.target;
                for (std::size_t i = 0; i < trains.size(); ++i) {
                    intended[i] = trains[i].id == *pulse.target;
                }
            } else {
                const Domain want = pulse.direction == PulseDirection::Down ? Domain::Optical : Domain::Spin;
                intended_label = pulse.direction == PulseDirection::Down ? "<optical trains>" : "<spin trains>";
                for (std::size_t i = 0; i < trains.size(); ++i) {
                    intended[i] = rt[i].domain == want;
                }
            }

            for (std::size_t i = 0; i < trains.size(); ++i) {
                auto &t = rt[i];
                if (t.domain == Domain::Optical) {
                    t.remaining -= ev.time - t.optical_since;
                    t.domain = Domain::Spin;
                    ++t.version;
                    result.trains[i].state = TrainState::Spin;
                    result.log.push_back({ev.time, EventKind::MappedToSpin, trains[i].id, pidx, !intended[i]});
                } else if (t.domain == Domain::Spin) {
                    t.domain = Domain::Optical;
                    t.optical_since = ev.time;
                    ++t.version;
                    result.trains[i].state = TrainState::Optical;
                    schedule_reemit(i, ev.time);
                    result.log.push_back({ev.time, EventKind::MappedToOptical, trains[i].id, pidx, !intended[i]});
                    if (!intended[i]) {
                        t.corrupted = true;
                        result.conflicts.push_back(
                            {trains[i].id, ev.index, ev.time, intended_label, ev.time + t.remaining});
                    }
                }
            }
            break;
        }
        }
    }
    for (std::size_t i = 0; i < trains.size(); ++i) {
        if (rt[i].corrupted && rt[i].domain != Domain::Gone) {
            result.trains[i].state = TrainState::Corrupted;
        }
    }
    return result;
}

void write_event_log_csv(std::ostream &out, const ScheduleResult &result)
{
    csv::Writer w(out, {"time_s", "event", "train", "pulse_index", "forced"});
    for (const auto &e : result.log) {
        w.row(std::vector<csv::Field>{e.time, to_string(e.kind), e.train, static_cast<long long>(e.pulse_index),
                                    static_cast<long long>(e.forced ? 1 : 0)});
    }
}

long long max_conflict_free_block(double optical_storage_time, double mode_duration)
{
    if (!(optical_storage_time > 0.0) || !(mode_duration > 0.0)) {
        throw std::invalid_argument("max_conflict_free_block: inputs must be positive");
    }
    return static_cast<long long>(std::floor(optical_storage_time / mode_duration * (1.0 + 1e-12)));
}

std::string to_string(RepeaterProtocol p) { return p == RepeaterProtocol::TwoLevelAfc ? "two_level_afc" : "spin_wave"; }

RepeaterProtocol repeater_protocol_from_string(const std::string &name)
{
    if (name == "two_level_afc") {
        return RepeaterProtocol::TwoLevelAfc;
    }
    if (name == "spin_wave") {
        return RepeaterProtocol::SpinWave;
    }
    throw std::invalid_argument("protocol must be 'two_level_afc' or 'spin_wave', got '" + name + "'");
}

void RepeaterConfig::validate() const
{
    auto require = [](bool ok, const char *what) {
        if (!ok) {
            throw std::invalid_argument(std::string("repeater: ") + what);
        }
    };
    require(optical_storage_time > 0.0, "optical_storage_time must be > 0");
    require(mode_duration > 0.0, "mode_duration must be > 0");
    require(n_spectral_channels >= 1, "n_spectral_channels must be >= 1");
    require(per_mode_success_probability > 0.0 && per_mode_success_probability <= 1.0,
            "per_mode_success_probability must be in (0, 1]");
    require(attempt_cycle > 0.0, "attempt_cycle must be > 0");
    require(spin_dead_time >= 0.0, "spin_dead_time must be >= 0");
}

double BlockSchedule::dead_time_fraction() const
{
    return block_slots > 0 ? 1.0 - static_cast<double>(usable_slots) / static_cast<double>(block_slots) : 0.0;
}

BlockSchedule simulate_block_schedule(const RepeaterConfig &cfg)
{
    cfg.validate();
    BlockSchedule s;
    s.block_slots = max_conflict_free_block(cfg.optical_storage_time, cfg.mode_duration);
    const double dead = cfg.protocol == RepeaterProtocol::SpinWave ? cfg.spin_dead_time : 0.0;
    // Slot k occupies [k md, (k+1) md); it is usable if the down-pulse can still complete before
    // the first mode of the block rephases.
    const double eps = 1e-12 * cfg.optical_storage_time;
    for (long long k = 0; k < s.block_slots; ++k) {
        const double end = static_cast<double>(k + 1) * cfg.mode_duration;
        if (end + dead <= cfg.optical_storage_time + eps) {
            ++s.usable_slots;
        }
    }
    return s;
}

RateEstimate entanglement_rate(const RepeaterConfig &cfg, std::uint64_t seed, long long n_cycles)
{
    cfg.validate();
    if (n_cycles < 1) {
        throw std::invalid_argument("entanglement_rate: n_cycles must be >= 1");
    }
    const BlockSchedule sched = simulate_block_schedule(cfg);
    RateEstimate est;
    est.dead_time_fraction = sched.dead_time_fraction();
    est.effective_modes = static_cast<double>(sched.usable_slots) * static_cast<double>(cfg.n_spectral_channels);
    est.analytic_rate = est.effective_modes * cfg.per_mode_success_probability / cfg.attempt_cycle;
    est.cycles = n_cycles;

    const auto trials = sched.usable_slots * cfg.n_spectral_channels;
    std::mt19937_64 rng(seed);
    std::binomial_distribution<long long> successes(trials, cfg.per_mode_success_probability);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long long c = 0; c < n_cycles; ++c) {
        const auto s = static_cast<double>(trials > 0 ? successes(rng) : 0);
        sum += s;
        sum_sq += s * s;
    }
    const double n = static_cast<double>(n_cycles);
    const double mean = sum / n;
    const double var = n > 1.0 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    est.monte_carlo_rate = mean / cfg.attempt_cycle;
    est.monte_carlo_std_error = std::sqrt(var / n) / cfg.attempt_cycle;
    return est;
}

} // namespace afc
