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

#include "afcsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace afcsim {

namespace {

struct KeyDef {
    const char *section;
    const char *key;
    const char *value;
    const char *doc;
};

// Fixed sections. Order here is the order of --print-defaults.
const std::vector<KeyDef> &schema()
{
    static const std::vector<KeyDef> defs = {
        {"run", "seed", "1", "seed for every random draw of the run"},

        {"comb", "delta", "200e3", "peak spacing [Hz]; storage time is 1/delta"},
        {"comb", "finesse", "2", "delta / tooth width"},
        {"comb", "d_peak", "1", "optical depth at a tooth"},
        {"comb", "d0", "0", "background optical depth between teeth"},
        {"comb", "bandwidth", "1e6", "total comb extent [Hz]"},
        {"comb", "center_detuning", "0", "[Hz]"},
        {"comb", "tooth_shape", "square", "square | gaussian"},

        {"decoherence", "t2", "inf", "optical coherence time [s]"},
        {"decoherence", "tm_extra", "inf", "extra efficiency decay time [s]"},
        {"decoherence", "combined_tm", "", "if set, tm_extra is chosen so the efficiency 1/e time equals this [s]"},
        {"decoherence", "t1", "inf", "radiative lifetime [s], bookkeeping only"},

        {"storage", "phase", "minimal", "minimal (causal medium) | flat"},
        {"storage", "out_of_band_depth", "0", "optical depth outside the comb bandwidth"},
        {"storage", "min_in_band_fraction", "0.95", "spectral energy fraction required inside the comb"},
        {"storage", "max_echo_order", "3", "highest echo order reported"},

        {"input", "n_samples", "65536", "grid size (power of two) for the comb subcommand"},
        {"input", "dt", "4e-9", "grid step [s]"},
        {"input", "pulse_fwhm", "1e-6", "gaussian intensity FWHM [s]"},
        {"input", "pulse_center", "10e-6", "[s]"},
        {"input", "detuning", "0", "carrier offset [Hz]"},

        {"sweep", "tau_min", "10e-6", "first storage time [s]"},
        {"sweep", "tau_max", "100e-6", "last storage time [s]"},
        {"sweep", "n_points", "10", "evenly spaced storage times"},
        {"sweep", "n_samples", "1048576", "grid size (power of two)"},
        {"sweep", "dt", "10e-9", "grid step [s]"},
        {"sweep", "pulse_fwhm", "2e-6", "[s]"},
        {"sweep", "pulse_center", "10e-6", "[s]"},
        {"sweep", "fixture", "", "optional CSV (tau_s, efficiency) fitted alongside the simulation"},

        {"echo_fit", "data", "", "CSV (t12_s, intensity); empty = synthetic decay below"},
        {"echo_fit", "t2", "1.1e-3", "synthetic T2 [s]"},
        {"echo_fit", "stretch", "1", "synthetic stretch exponent"},
        {"echo_fit", "t12_min", "10e-6", "[s]"},
        {"echo_fit", "t12_max", "600e-6", "[s]"},
        {"echo_fit", "n_points", "16", ""},
        {"echo_fit", "noise", "0.02", "relative gaussian noise of synthetic samples"},
        {"echo_fit", "fit_stretch", "false", "also fit the stretch exponent"},
        {"echo_fit", "t2_table", "", "optional CSV (field_G, t2_s) to interpolate"},
        {"echo_fit", "field", "", "field [G] at which to interpolate t2_table"},

        {"plan", "n_channels", "11", ""},
        {"plan", "spacing", "10e6", "channel spacing [Hz]; channel j sits at j * spacing"},
        {"plan", "channel_bandwidth", "1e6", "comb bandwidth per channel [Hz]"},

        {"cavity", "fwhm", "7.5e6", "power transmission FWHM [Hz]"},
        {"cavity", "resonance_detuning", "0", "[Hz]"},
        {"cavity", "peak_transmission", "1", ""},

        {"multiplex", "selected", "0", "channel shifted onto the cavity"},
        {"multiplex", "offset_start", "5e-6", "input time of channel 0 [s]"},
        {"multiplex", "offset_step", "20e-6", "input time step between channels [s]"},
        {"multiplex", "n_samples", "262144", "grid size (power of two)"},
        {"multiplex", "dt", "1e-9", "grid step [s]"},
        {"multiplex", "pulse_fwhm", "1e-6", "[s]"},
        {"multiplex", "channel_gains", "", "comma separated relative pulse energies (empty = all 1)"},
        {"multiplex", "serrodyne_leakage", "0", "unshifted power fraction"},
        {"multiplex", "full_matrix", "true", "compute every crosstalk row"},
        {"multiplex", "trace_stride", "4", "write every n-th sample of the detected trace"},

        {"repeater", "optical_storage_time", "100e-6", "[s]"},
        {"repeater", "mode_duration", "1e-6", "[s]"},
        {"repeater", "n_spectral_channels", "1", ""},
        {"repeater", "success_probability", "0.01", "per-mode heralding probability per attempt"},
        {"repeater", "attempt_cycle", "1e-3", "[s]"},
        {"repeater", "protocol", "two_level_afc", "two_level_afc | spin_wave"},
        {"repeater", "spin_dead_time", "0", "spin-wave control time unavailable for absorption [s]"},
        {"repeater", "cycles", "100000", "Monte Carlo attempt cycles"},

        {"pair_source", "mean_pairs", "0.05", "thermal mean pair number per window"},
        {"pair_source", "herald_efficiency", "0.25", ""},
        {"pair_source", "signal_efficiency", "0.25", ""},
        {"pair_source", "dark_prob_herald", "0", "per window"},
        {"pair_source", "dark_prob_signal", "0", "per window"},

        {"g2", "n_windows", "1e6", ""},
        {"g2", "memory", "false", "send the signal photon through the memory"},
        {"g2", "memory_efficiency", "0.0035", ""},
        {"g2", "memory_background", "0", "added signal click probability per window"},
    };
    return defs;
}

struct ItemSchema {
    const char *prefix;
    std::vector<std::pair<const char *, const char *>> keys;
};

const std::vector<ItemSchema> &item_schemas()
{
    static const std::vector<ItemSchema> items = {
        {"train:", {{"arrival_time", "0"}, {"n_modes", "1"}, {"mode_duration", "1e-6"}}},
        {"control:", {{"time", "0"}, {"direction", "down"}, {"target", ""}}},
    };
    return items;
}

const ItemSchema *item_schema_for(const std::string &section)
{
    for (const auto &s : item_schemas()) {
        const std::string prefix = s.prefix;
        if (section.size() > prefix.size() && section.compare(0, prefix.size(), prefix) == 0) {
            return &s;
        }
    }
    return nullptr;
}

std::string item_name(const std::string &section)
{
    return section.substr(section.find(':') + 1);
}

std::string where(const std::string &section, const std::string &key)
{
    return "[" + section + "] " + key;
}

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string &text, const std::string &context)
{
    const std::string t = trim(text);
    double v = 0.0;
    const char *first = t.data();
    const char *last = t.data() + t.size();
    if (!t.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last || std::isnan(v)) {
        throw ConfigError(context + ": expected a number, got '" + text + "'");
    }
    return v;
}

template <class F> auto rethrow_as_config(const std::string &section, F f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError("[" + section + "] " + e.what());
    }
}

} // namespace

ExperimentConfig ExperimentConfig::defaults()
{
    ExperimentConfig c;
    for (const auto &d : schema()) {
        c.sections_[d.section][d.key] = d.value;
    }
    c.base_dir = std::filesystem::current_path();
    return c;
}

ExperimentConfig ExperimentConfig::parse(std::istream &in, const std::string &origin)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    ExperimentConfig c = defaults();
    for (const auto &[section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(origin + ": key '" + section + "' must be inside a [section]");
        }
        const ItemSchema *item = item_schema_for(section);
        if (item != nullptr) {
            auto &dst = c.sections_[section];
            for (const auto &[k, v] : item->keys) {
                dst[k] = v;
            }
        } else if (c.sections_.count(section) == 0) {
            throw ConfigError(origin + ": unknown section [" + section + "]");
        }
        auto &dst = c.sections_[section];
        for (const auto &[key, value] : body) {
            if (!value.empty()) {
                throw ConfigError(origin + ": " + where(section, key) + ": nested keys are not allowed");
            }
            if (dst.count(key) == 0) {
                throw ConfigError(origin + ": unknown key " + where(section, key));
            }
            dst[key] = trim(value.data());
        }
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    ExperimentConfig c = parse(in, path.string());
    c.base_dir = std::filesystem::absolute(path).parent_path();
    return c;
}

const std::string &ExperimentConfig::raw(const std::string &section, const std::string &key) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end() || s->second.count(key) == 0) {
        throw std::logic_error("config: no key " + where(section, key));
    }
    return s->second.at(key);
}

double ExperimentConfig::number(const std::string &section, const std::string &key) const
{
    return parse_number(raw(section, key), where(section, key));
}

long long ExperimentConfig::integer(const std::string &section, const std::string &key) const
{
    const double v = number(section, key);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) {
        throw ConfigError(where(section, key) + ": expected an integer, got '" + raw(section, key) + "'");
    }
    return static_cast<long long>(v);
}

bool ExperimentConfig::flag(const std::string &section, const std::string &key) const
{
    const std::string &v = raw(section, key);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError(where(section, key) + ": expected true or false, got '" + v + "'");
}

std::string ExperimentConfig::text(const std::string &section, const std::string &key) const
{
    return raw(section, key);
}

std::filesystem::path ExperimentConfig::path(const std::string &section, const std::string &key) const
{
    const std::string &v = raw(section, key);
    if (v.empty()) {
        return {};
    }
    const std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
}

std::uint64_t ExperimentConfig::seed() const
{
    const long long s = integer("run", "seed");
    if (s < 0) {
        throw ConfigError("[run] seed: must be >= 0");
    }
    return static_cast<std::uint64_t>(s);
}

void ExperimentConfig::set_seed(std::uint64_t seed) { sections_["run"]["seed"] = std::to_string(seed); }

afc::CombSpec ExperimentConfig::comb() const
{
    afc::CombSpec s;
    s.delta = number("comb", "delta");
    s.finesse = number("comb", "finesse");
    s.d_peak = number("comb", "d_peak");
    s.d0 = number("comb", "d0");
    s.bandwidth = number("comb", "bandwidth");
    s.center_detuning = number("comb", "center_detuning");
    s.tooth_shape = rethrow_as_config("comb", [&] { return afc::tooth_shape_from_string(text("comb", "tooth_shape")); });
    return s;
}

afc::DecoherenceModel ExperimentConfig::decoherence() const
{
    afc::DecoherenceModel d;
    d.t2 = number("decoherence", "t2");
    d.tm_extra = number("decoherence", "tm_extra");
    d.t1 = number("decoherence", "t1");
    if (!raw("decoherence", "combined_tm").empty()) {
        if (std::isfinite(d.tm_extra)) {
            throw ConfigError("[decoherence] combined_tm: cannot be combined with a finite tm_extra");
        }
        const double tm = number("decoherence", "combined_tm");
        d = rethrow_as_config("decoherence", [&] { return afc::DecoherenceModel::with_combined_tm(d.t2, tm, d.t1); });
    }
    return d;
}

afc::StorageOptions ExperimentConfig::storage_options() const
{
    afc::StorageOptions o;
    const std::string phase = text("storage", "phase");
    if (phase == "minimal") {
        o.phase = afc::PhaseMode::MinimalPhase;
    } else if (phase == "flat") {
        o.phase = afc::PhaseMode::Flat;
    } else {
        throw ConfigError("[storage] phase: must be 'minimal' or 'flat', got '" + phase + "'");
    }
    o.out_of_band_depth = number("storage", "out_of_band_depth");
    o.min_in_band_fraction = number("storage", "min_in_band_fraction");
    o.max_echo_order = static_cast<int>(integer("storage", "max_echo_order"));
    return o;
}

namespace {

afc::TimeGrid grid_from(const ExperimentConfig &c, const std::string &section)
{
    const long long n = c.integer(section, "n_samples");
    if (n < 16 || (n & (n - 1)) != 0) {
        throw ConfigError(where(section, "n_samples") + ": must be a power of two >= 16");
    }
    const double dt = c.number(section, "dt");
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError(where(section, "dt") + ": must be > 0");
    }
    return afc::TimeGrid(static_cast<std::size_t>(n), dt);
}

} // namespace

afc::SweepOptions ExperimentConfig::sweep_options() const
{
    afc::SweepOptions o;
    o.grid = grid_from(*this, "sweep");
    o.pulse_fwhm = number("sweep", "pulse_fwhm");
    o.pulse_center = number("sweep", "pulse_center");
    o.storage = storage_options();
    return o;
}

std::vector<double> ExperimentConfig::sweep_taus() const
{
    const double lo = number("sweep", "tau_min");
    const double hi = number("sweep", "tau_max");
    const long long n = integer("sweep", "n_points");
    if (!(lo > 0.0)) {
        throw ConfigError("[sweep] tau_min: must be > 0");
    }
    if (n < 1) {
        throw ConfigError("[sweep] n_points: must be >= 1");
    }
    if (n > 1 && !(hi > lo)) {
        throw ConfigError("[sweep] tau_max: must exceed tau_min");
    }
    std::vector<double> taus;
    for (long long i = 0; i < n; ++i) {
        taus.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return taus;
}

afc::ChannelPlan ExperimentConfig::plan() const
{
    afc::ChannelPlan p;
    const long long n = integer("plan", "n_channels");
    if (n < 1) {
        throw ConfigError("[plan] n_channels: must be >= 1");
    }
    p.n_channels = static_cast<std::size_t>(n);
    p.spacing = number("plan", "spacing");
    p.channel_bandwidth = number("plan", "channel_bandwidth");
    p.base_comb = comb();
    return p;
}

afc::FilterCavity ExperimentConfig::cavity() const
{
    afc::FilterCavity f;
    f.fwhm = number("cavity", "fwhm");
    f.resonance_detuning = number("cavity", "resonance_detuning");
    f.peak_transmission = number("cavity", "peak_transmission");
    return f;
}

afc::FeedforwardRun ExperimentConfig::feedforward() const
{
    afc::FeedforwardRun r;
    r.plan = plan();
    const long long sel = integer("multiplex", "selected");
    if (sel < 0 || static_cast<std::size_t>(sel) >= r.plan.n_channels) {
        throw ConfigError("[multiplex] selected: must be in [0, n_channels)");
    }
    r.selected = static_cast<std::size_t>(sel);
    r.decoherence = decoherence();
    r.cavity = cavity();
    const double start = number("multiplex", "offset_start");
    const double step = number("multiplex", "offset_step");
    for (std::size_t j = 0; j < r.plan.n_channels; ++j) {
        r.temporal_offsets.push_back(start + step * static_cast<double>(j));
    }
    r.grid = grid_from(*this, "multiplex");
    r.pulse_fwhm = number("multiplex", "pulse_fwhm");
    const std::string gains = raw("multiplex", "channel_gains");
    if (!gains.empty()) {
        std::stringstream ss(gains);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const double g = parse_number(item, "[multiplex] channel_gains");
            if (!(g > 0.0)) {
                throw ConfigError("[multiplex] channel_gains: entries must be > 0");
            }
            r.channel_gains.push_back(g);
        }
        if (r.channel_gains.size() != r.plan.n_channels) {
            throw ConfigError("[multiplex] channel_gains: need one entry per channel");
        }
    }
    r.serrodyne_leakage = number("multiplex", "serrodyne_leakage");
    r.phase = storage_options().phase;
    return r;
}

afc::RepeaterConfig ExperimentConfig::repeater() const
{
    afc::RepeaterConfig r;
    r.optical_storage_time = number("repeater", "optical_storage_time");
    r.mode_duration = number("repeater", "mode_duration");
    r.n_spectral_channels = integer("repeater", "n_spectral_channels");
    r.per_mode_success_probability = number("repeater", "success_probability");
    r.attempt_cycle = number("repeater", "attempt_cycle");
    r.protocol = rethrow_as_config("repeater", [&] { return afc::repeater_protocol_from_string(text("repeater", "protocol")); });
    r.spin_dead_time = number("repeater", "spin_dead_time");
    return r;
}

std::vector<afc::QubitTrain> ExperimentConfig::trains() const
{
    std::vector<afc::QubitTrain> out;
    for (const auto &[name, body] : sections_) {
        if (name.rfind("train:", 0) != 0) {
            continue;
        }
        afc::QubitTrain t;
        t.id = item_name(name);
        t.arrival_time = number(name, "arrival_time");
        const long long modes = integer(name, "n_modes");
        if (modes < 1 || modes > 1000000) {
            throw ConfigError(where(name, "n_modes") + ": must be in [1, 1e6]");
        }
        t.n_modes = static_cast<int>(modes);
        t.mode_duration = number(name, "mode_duration");
        out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const afc::QubitTrain &a, const afc::QubitTrain &b) { return a.arrival_time < b.arrival_time; });
    return out;
}

std::vector<afc::ControlPulse> ExperimentConfig::control_pulses() const
{
    std::vector<afc::ControlPulse> out;
    for (const auto &[name, body] : sections_) {
        if (name.rfind("control:", 0) != 0) {
            continue;
        }
        afc::ControlPulse p;
        p.time = number(name, "time");
        p.direction = rethrow_as_config(name, [&] { return afc::pulse_direction_from_string(text(name, "direction")); });
        if (!raw(name, "target").empty()) {
            p.target = raw(name, "target");
        }
        out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const afc::ControlPulse &a, const afc::ControlPulse &b) { return a.time < b.time; });
    return out;
}

afc::PairSourceModel ExperimentConfig::pair_source() const
{
    afc::PairSourceModel m;
    m.mean_pairs_per_window = number("pair_source", "mean_pairs");
    m.herald_efficiency = number("pair_source", "herald_efficiency");
    m.signal_efficiency = number("pair_source", "signal_efficiency");
    m.dark_prob_herald = number("pair_source", "dark_prob_herald");
    m.dark_prob_signal = number("pair_source", "dark_prob_signal");
    return m;
}

void ExperimentConfig::validate() const
{
    seed();
    rethrow_as_config("comb", [&] { comb().validate(); });
    rethrow_as_config("decoherence", [&] { decoherence().validate(); });
    const auto storage = storage_options();
    if (!(storage.out_of_band_depth >= 0.0)) {
        throw ConfigError("[storage] out_of_band_depth: must be >= 0");
    }
    if (!(storage.min_in_band_fraction >= 0.0 && storage.min_in_band_fraction <= 1.0)) {
        throw ConfigError("[storage] min_in_band_fraction: must be in [0, 1]");
    }
    if (storage.max_echo_order < 1) {
        throw ConfigError("[storage] max_echo_order: must be >= 1");
    }
    grid_from(*this, "input");
    for (const char *k : {"pulse_fwhm"}) {
        if (!(number("input", k) > 0.0)) {
            throw ConfigError(where("input", k) + ": must be > 0");
        }
        if (!(number("sweep", k) > 0.0)) {
            throw ConfigError(where("sweep", k) + ": must be > 0");
        }
        if (!(number("multiplex", k) > 0.0)) {
            throw ConfigError(where("multiplex", k) + ": must be > 0");
        }
    }
    sweep_options();
    sweep_taus();

    if (!(number("echo_fit", "t2") > 0.0)) {
        throw ConfigError("[echo_fit] t2: must be > 0");
    }
    if (!(number("echo_fit", "stretch") > 0.0)) {
        throw ConfigError("[echo_fit] stretch: must be > 0");
    }
    if (!(number("echo_fit", "t12_min") > 0.0) || !(number("echo_fit", "t12_max") > number("echo_fit", "t12_min"))) {
        throw ConfigError("[echo_fit] t12_min/t12_max: need 0 < t12_min < t12_max");
    }
    if (integer("echo_fit", "n_points") < 3) {
        throw ConfigError("[echo_fit] n_points: must be >= 3");
    }
    if (!(number("echo_fit", "noise") >= 0.0 && number("echo_fit", "noise") < 0.5)) {
        throw ConfigError("[echo_fit] noise: must be in [0, 0.5)");
    }
    flag("echo_fit", "fit_stretch");
    if (!raw("echo_fit", "field").empty()) {
        number("echo_fit", "field");
    }

    rethrow_as_config("plan", [&] { plan().validate(); });
    rethrow_as_config("cavity", [&] { cavity().validate(); });
    const auto ff = feedforward();
    if (!(ff.serrodyne_leakage >= 0.0 && ff.serrodyne_leakage <= 1.0)) {
        throw ConfigError("[multiplex] serrodyne_leakage: must be in [0, 1]");
    }
    flag("multiplex", "full_matrix");
    if (integer("multiplex", "trace_stride") < 1) {
        throw ConfigError("[multiplex] trace_stride: must be >= 1");
    }

    rethrow_as_config("repeater", [&] { repeater().validate(); });
    if (integer("repeater", "cycles") < 1) {
        throw ConfigError("[repeater] cycles: must be >= 1");
    }
    const auto ts = trains();
    for (const auto &t : ts) {
        if (!(t.mode_duration > 0.0)) {
            throw ConfigError("[train:" + t.id + "] mode_duration: must be > 0");
        }
    }
    const auto ps = control_pulses();
    for (std::size_t i = 1; i < ps.size(); ++i) {
        if (!(ps[i].time > ps[i - 1].time)) {
            throw ConfigError("[control:*] time: control pulse times must be distinct");
        }
    }
    for (const auto &p : ps) {
        if (p.target && std::none_of(ts.begin(), ts.end(), [&](const afc::QubitTrain &t) { return t.id == *p.target; })) {
            throw ConfigError("[control:*] target: no train named '" + *p.target + "'");
        }
    }

    rethrow_as_config("pair_source", [&] { pair_source().validate(); });
    if (integer("g2", "n_windows") < afc::kMinWindows) {
        throw ConfigError("[g2] n_windows: must be >= " + std::to_string(afc::kMinWindows));
    }
    if (flag("g2", "memory")) {
        rethrow_as_config("g2", [&] {
            afc::with_memory(pair_source(), number("g2", "memory_efficiency"), number("g2", "memory_background"));
        });
    }
}

std::string ExperimentConfig::to_ini() const
{
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const std::string &name, const Section &body, const std::vector<std::string> &order) {
        if (!first) {
            out << '\n';
        }
        first = false;
        out << '[' << name << "]\n";
        for (const auto &k : order) {
            out << k << " = " << body.at(k) << '\n';
        }
    };
    std::vector<std::string> fixed;
    for (const auto &d : schema()) {
        if (std::find(fixed.begin(), fixed.end(), d.section) == fixed.end()) {
            fixed.emplace_back(d.section);
        }
    }
    for (const auto &name : fixed) {
        std::vector<std::string> order;
        for (const auto &d : schema()) {
            if (d.section == name) {
                order.emplace_back(d.key);
            }
        }
        emit(name, sections_.at(name), order);
    }
    for (const auto &[name, body] : sections_) {
        if (const ItemSchema *item = item_schema_for(name)) {
            std::vector<std::string> order;
            for (const auto &kv : item->keys) {
                order.emplace_back(kv.first);
            }
            emit(name, body, order);
        }
    }
    return out.str();
}

std::string defaults_text()
{
    std::ostringstream out;
    out << "; afcsim configuration. Every key is optional; the values below are the defaults.\n"
           "; Repeater scenarios add [train:<id>] sections (arrival_time, n_modes, mode_duration)\n"
           "; and [control:<name>] sections (time, direction = down | up, target = <train id>).\n";
    std::string current;
    for (const auto &d : schema()) {
        if (d.section != current) {
            current = d.section;
            out << "\n[" << current << "]\n";
        }
        if (*d.doc != '\0') {
            out << "; " << d.doc << '\n';
        }
        out << d.key << " = " << d.value << '\n';
    }
    return out.str();
}

} // namespace afcsim
