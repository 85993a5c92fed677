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

#include "afcsim/runner.hpp"

#include "afcmem/csv.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <system_error>
#include <unistd.h>

#ifndef AFCSIM_VERSION
#define AFCSIM_VERSION "0.0.0"
#endif

namespace afcsim {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using afc::csv::Field;

const char *version() { return AFCSIM_VERSION; }

json RunReport::to_json() const
{
    json j;
    j["tool"] = tool;
    j["version"] = version;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    json cfg = json::object();
    for (const auto &[section, body] : config.sections()) {
        for (const auto &[key, value] : body) {
            cfg[section][key] = value;
        }
    }
    j["config"] = cfg;
    j["outputs"] = outputs;
    j["summary"] = summary;
    return j;
}

namespace {

/// Scratch directory that becomes out_dir on commit and is removed otherwise.
class Staging {
  public:
    explicit Staging(fs::path target) : target_(std::move(target))
    {
        if (target_.filename().empty()) {
            target_ = target_.parent_path();
        }
        const fs::path parent = fs::absolute(target_).parent_path();
        fs::create_directories(parent);
        if (fs::exists(target_)) {
            if (!fs::is_directory(target_)) {
                throw ConfigError("--out: '" + target_.string() + "' exists and is not a directory");
            }
            if (!fs::is_empty(target_) && !fs::exists(target_ / "report.json")) {
                throw ConfigError("--out: refusing to replace non-empty directory '" + target_.string() +
                                  "' that holds no afcsim report");
            }
        }
        dir_ = parent / ("." + target_.filename().string() + ".tmp-" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Staging()
    {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(dir_, ec);
        }
    }
    Staging(const Staging &) = delete;
    Staging &operator=(const Staging &) = delete;

    void write(const std::string &name, const std::function<void(std::ostream &)> &body)
    {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot create '" + (dir_ / name).string() + "'");
        }
        body(out);
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for '" + (dir_ / name).string() + "'");
        }
        names_.push_back(name);
    }

    const std::vector<std::string> &names() const { return names_; }

    void commit()
    {
        if (fs::exists(target_)) {
            fs::remove_all(target_);
        }
        fs::rename(dir_, target_);
        committed_ = true;
    }

  private:
    fs::path target_;
    fs::path dir_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

std::string gp_header(const std::string &png, const std::string &title)
{
    return "set datafile separator ','\n"
           "set terminal pngcairo size 900,600\n"
           "set output '" + png + "'\n"
           "set title '" + title + "'\n"
           "set key top right\n";
}

json comb_run(const ExperimentConfig &cfg, Staging &out)
{
    const auto spec = cfg.comb();
    const auto dec = cfg.decoherence();
    const auto opts = cfg.storage_options();
    const afc::TimeGrid grid(static_cast<std::size_t>(cfg.integer("input", "n_samples")), cfg.number("input", "dt"));
    const auto profile = afc::build_profile(spec, grid.df(), grid.size(), opts.out_of_band_depth);
    out.write("profile.csv", [&](std::ostream &os) { afc::write_csv(os, profile); });

    const auto input = afc::gaussian_pulse(grid, cfg.number("input", "pulse_center"), cfg.number("input", "pulse_fwhm"),
                                           cfg.number("input", "detuning"), 1.0);
    const auto r = afc::store_and_recall(input, spec, dec, opts);
    out.write("storage.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"time_s", "input_intensity", "output_intensity"});
        for (std::size_t k = 0; k < grid.size(); ++k) {
            w.row({grid.time(k), std::norm(input.samples()[k]), std::norm(r.output.samples()[k])});
        }
    });
    out.write("comb.gp", [&](std::ostream &os) {
        os << gp_header("comb_profile.png", "Comb optical depth")
           << "set xlabel 'detuning [MHz]'\nset ylabel 'optical depth'\n"
              "plot 'profile.csv' using ($1/1e6):2 skip 1 with steps title 'd(f)'\n"
              "set output 'comb_storage.png'\nset title 'Storage and recall'\n"
              "set xlabel 'time [us]'\nset ylabel 'intensity'\nset logscale y\n"
              "plot 'storage.csv' using ($1*1e6):2 skip 1 with lines title 'input', \\\n"
              "     '' using ($1*1e6):3 skip 1 with lines title 'output'\n";
    });

    json s;
    s["n_teeth"] = spec.n_teeth();
    s["tooth_width_Hz"] = spec.tooth_width();
    s["storage_time_s"] = spec.storage_time();
    s["integrated_depth_Hz"] = afc::integrated_depth(profile);
    s["analytic_efficiency"] = afc::analytic_efficiency(spec);
    s["efficiency"] = r.efficiency;
    s["efficiency_decay"] = dec.efficiency_decay(spec.storage_time());
    s["echo_delay_s"] = r.echo_delay;
    s["transmitted_fraction"] = r.transmitted_energy / r.input_energy;
    json higher = json::array();
    for (double e : r.higher_order_echo_energies) {
        higher.push_back(e / r.input_energy);
    }
    s["higher_order_echo_fractions"] = higher;
    if (spec.d0 < spec.d_peak) {
        const auto proj = afc::cavity_enhanced_projection(spec, dec, spec.storage_time());
        s["cavity_projection"] = proj.cavity;
        s["single_pass_projection"] = proj.single_pass;
        s["impedance_factor"] = proj.impedance_factor;
    }
    return s;
}

json fit_json(const afc::DecayFit &f)
{
    json j;
    j["eta0"] = f.eta0;
    j["eta0_std_error"] = f.eta0_std_error;
    j["tau_1e_s"] = f.tau_1e;
    j["tau_1e_std_error_s"] = f.tau_1e_std_error;
    j["residual_rms"] = f.residual_rms;
    j["n_points"] = f.n_points;
    return j;
}

json sweep_run(const ExperimentConfig &cfg, Staging &out, unsigned threads)
{
    auto opts = cfg.sweep_options();
    opts.threads = threads;
    const auto dec = cfg.decoherence();
    const auto sweep = afc::efficiency_sweep(cfg.sweep_taus(), cfg.comb(), dec, opts);
    const auto fit = afc::fit_exponential_decay(afc::to_decay_points(sweep));

    std::vector<std::pair<std::string, afc::DecayFit>> fits{{"simulation", fit}};
    std::vector<afc::DecayPoint> fixture;
    const fs::path fixture_path = cfg.path("sweep", "fixture");
    if (!fixture_path.empty()) {
        const auto table = afc::csv::read_numeric_file(fixture_path.string());
        const auto ct = table.column("tau_s");
        const auto ce = table.column("efficiency");
        for (const auto &row : table.rows) {
            fixture.push_back({row[ct], row[ce]});
        }
        fits.emplace_back("fixture", afc::fit_exponential_decay(fixture));
    }

    out.write("sweep.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"tau_s", "efficiency", "echo_delay_s", "decay_factor"});
        for (const auto &p : sweep) {
            w.row({p.tau, p.efficiency, p.echo_delay, dec.efficiency_decay(p.tau)});
        }
    });
    out.write("fit.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"source", "eta0", "eta0_std_error", "tau_1e_s", "tau_1e_std_error_s", "residual_rms",
                                "n_points"});
        for (const auto &[name, f] : fits) {
            w.row(std::vector<Field>{name, f.eta0, f.eta0_std_error, f.tau_1e, f.tau_1e_std_error, f.residual_rms,
                                     static_cast<long long>(f.n_points)});
        }
    });
    if (!fixture.empty()) {
        out.write("fixture.csv", [&](std::ostream &os) {
            afc::csv::Writer w(os, {"tau_s", "efficiency"});
            for (const auto &p : fixture) {
                w.row({p.tau, p.efficiency});
            }
        });
    }
    out.write("sweep.gp", [&](std::ostream &os) {
        os << gp_header("sweep.png", "Efficiency versus storage time")
           << "set xlabel 'storage time [us]'\nset ylabel 'efficiency [%]'\n"
           << "eta0 = " << afc::csv::format_double(fit.eta0) << "\n"
           << "tm = " << afc::csv::format_double(fit.tau_1e * 1e6) << "\n"
           << "plot 'sweep.csv' using ($1*1e6):($2*100) skip 1 with points pt 7 title 'simulation', \\\n"
           << "     eta0*100*exp(-x/tm) title sprintf('fit, T_m = %.2f us', tm)";
        if (!fixture.empty()) {
            os << ", \\\n     'fixture.csv' using ($1*1e6):($2*100) skip 1 with points pt 6 title 'fixture'";
        }
        os << "\n";
    });

    json s;
    for (const auto &[name, f] : fits) {
        s["fit_" + name] = fit_json(f);
    }
    s["combined_tm_s"] = dec.combined_tm();
    return s;
}

json echo_fit_run(const ExperimentConfig &cfg, Staging &out)
{
    std::vector<afc::EchoSample> samples;
    const fs::path data = cfg.path("echo_fit", "data");
    if (!data.empty()) {
        const auto table = afc::csv::read_numeric_file(data.string());
        const auto ct = table.column("t12_s");
        const auto ci = table.column("intensity");
        for (const auto &row : table.rows) {
            samples.push_back({row[ct], row[ci]});
        }
    } else {
        const double t2 = cfg.number("echo_fit", "t2");
        const double x = cfg.number("echo_fit", "stretch");
        const double lo = cfg.number("echo_fit", "t12_min");
        const double hi = cfg.number("echo_fit", "t12_max");
        const double noise = cfg.number("echo_fit", "noise");
        const long long n = cfg.integer("echo_fit", "n_points");
        std::mt19937_64 rng(cfg.seed());
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (long long i = 0; i < n; ++i) {
            const double t12 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            const double factor = std::max(1e-6, 1.0 + noise * gauss(rng));
            samples.push_back({t12, afc::two_pulse_echo_intensity(t12, t2, x) * factor});
        }
    }
    const auto fit = afc::fit_two_pulse_echo(samples, cfg.flag("echo_fit", "fit_stretch"));

    out.write("echo.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"t12_s", "intensity", "fit_intensity"});
        for (const auto &p : samples) {
            w.row({p.t12, p.intensity, fit.amplitude * afc::two_pulse_echo_intensity(p.t12, fit.t2, fit.stretch)});
        }
    });
    out.write("echo_fit.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"amplitude", "amplitude_std_error", "t2_s", "t2_std_error_s", "stretch",
                                "stretch_std_error", "residual_rms"});
        w.row({fit.amplitude, fit.amplitude_std_error, fit.t2, fit.t2_std_error, fit.stretch, fit.stretch_std_error,
               fit.residual_rms});
    });
    out.write("echo.gp", [&](std::ostream &os) {
        os << gp_header("echo.png", "Two-pulse photon echo decay")
           << "set xlabel 't_{12} [us]'\nset ylabel 'echo intensity'\nset logscale y\n"
              "plot 'echo.csv' using ($1*1e6):2 skip 1 with points pt 7 title 'data', \\\n"
              "     '' using ($1*1e6):3 skip 1 with lines title 'fit'\n";
    });

    json s;
    s["samples"] = samples.size();
    s["source"] = data.empty() ? "synthetic" : data.filename().string();
    s["amplitude"] = fit.amplitude;
    s["t2_s"] = fit.t2;
    s["t2_std_error_s"] = fit.t2_std_error;
    s["stretch"] = fit.stretch;
    s["stretch_std_error"] = fit.stretch_std_error;
    s["efficiency_limit_1e_s"] = fit.t2 / 4.0;

    const fs::path table_path = cfg.path("echo_fit", "t2_table");
    if (!table_path.empty()) {
        const auto table = afc::T2FieldTable::from_csv(table_path.string());
        s["field_of_max_t2_G"] = table.field_of_max_t2();
        if (!cfg.raw("echo_fit", "field").empty()) {
            const double field = cfg.number("echo_fit", "field");
            try {
                s["t2_at_field_s"] = table.t2_at(field);
            } catch (const std::out_of_range &e) {
                throw ConfigError(std::string("[echo_fit] field: ") + e.what());
            }
        }
    }
    return s;
}

json multiplex_run(const ExperimentConfig &cfg, Staging &out)
{
    const auto run = cfg.feedforward();
    const auto res = afc::simulate_feedforward_run(run);
    const auto stride = static_cast<std::size_t>(cfg.integer("multiplex", "trace_stride"));
    out.write("trace.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"time_s", "intensity"});
        for (std::size_t k = 0; k < res.intensity.size(); k += stride) {
            w.row({res.grid.time(k), res.intensity[k]});
        }
    });
    out.write("slots.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"channel", "detuning_Hz", "slot_start_s", "slot_end_s", "energy_before_cavity",
                                "energy_after_cavity", "crosstalk"});
        for (std::size_t j = 0; j < res.slots.size(); ++j) {
            w.row(std::vector<Field>{static_cast<long long>(j), run.plan.channel_center(j), res.slots[j].first,
                                     res.slots[j].second, res.slot_energy_before_cavity[j],
                                     res.slot_energy_after_cavity[j], res.crosstalk_row[j]});
        }
    });

    json s;
    s["selected"] = run.selected;
    s["crosstalk_row"] = res.crosstalk_row;
    const double tau = run.plan.base_comb.storage_time();
    s["storage_time_s"] = tau;
    s["multimode_capacity"] =
        afc::multimode_capacity(tau, run.pulse_fwhm, static_cast<long long>(run.plan.n_channels));
    s["lorentzian_neighbor_transmission"] = run.cavity.power_transmission(run.plan.spacing) / run.cavity.peak_transmission;

    if (cfg.flag("multiplex", "full_matrix")) {
        const auto m = afc::crosstalk_matrix(run);
        out.write("crosstalk.csv", [&](std::ostream &os) {
            std::vector<std::string> header{"selected_channel"};
            for (std::size_t j = 0; j < m.size(); ++j) {
                header.push_back("channel_" + std::to_string(j));
            }
            afc::csv::Writer w(os, header);
            for (std::size_t i = 0; i < m.size(); ++i) {
                std::vector<Field> row{static_cast<long long>(i)};
                for (double v : m[i]) {
                    row.emplace_back(v);
                }
                w.row(row);
            }
        });
        double worst = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (i != j) {
                    worst = std::max(worst, m[i][j]);
                }
            }
        }
        s["max_offdiagonal_crosstalk"] = worst;
    }

    const auto scan = afc::resonance_scan(run);
    out.write("scan.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"channel", "detuning_Hz", "transmitted_energy", "echo_energy"});
        for (const auto &p : scan) {
            w.row(std::vector<Field>{static_cast<long long>(p.channel), p.detuning, p.transmitted_energy,
                                     p.echo_energy});
        }
    });
    out.write("multiplex.gp", [&](std::ostream &os) {
        os << gp_header("multiplex_trace.png", "Feed-forward selection of channel " + std::to_string(run.selected))
           << "set xlabel 'time [us]'\nset ylabel 'detected intensity'\n"
              "plot 'trace.csv' using ($1*1e6):2 skip 1 with lines title 'after cavity'\n"
              "set output 'multiplex_scan.png'\nset title 'Cavity scan over the channels'\n"
              "set xlabel 'channel detuning [MHz]'\nset ylabel 'energy'\n"
              "plot 'scan.csv' using ($2/1e6):3 skip 1 with linespoints title 'transmitted', \\\n"
              "     '' using ($2/1e6):4 skip 1 with linespoints title 'echo'\n";
    });
    return s;
}

json repeater_run(const ExperimentConfig &cfg, Staging &out)
{
    const auto rc = cfg.repeater();
    const auto trains = cfg.trains();
    const auto pulses = cfg.control_pulses();
    const auto schedule = afc::simulate_spinwave_schedule(trains, pulses, rc.optical_storage_time);
    out.write("events.csv", [&](std::ostream &os) { afc::write_event_log_csv(os, schedule); });
    out.write("conflicts.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"train", "pulse_index", "pulse_time_s", "intended_for", "forced_reemission_time_s"});
        for (const auto &c : schedule.conflicts) {
            w.row(std::vector<Field>{c.train, static_cast<long long>(c.pulse_index), c.pulse_time, c.intended_for,
                                     c.forced_reemission_time});
        }
    });

    const long long cycles = cfg.integer("repeater", "cycles");
    std::vector<std::pair<afc::RepeaterConfig, afc::RateEstimate>> rates;
    for (auto protocol : {afc::RepeaterProtocol::TwoLevelAfc, afc::RepeaterProtocol::SpinWave}) {
        auto c = rc;
        c.protocol = protocol;
        rates.emplace_back(c, afc::entanglement_rate(c, cfg.seed(), cycles));
    }
    out.write("rates.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"protocol", "usable_slots", "dead_time_fraction", "effective_modes",
                                "analytic_rate_Hz", "monte_carlo_rate_Hz", "monte_carlo_std_error_Hz"});
        for (const auto &[c, r] : rates) {
            const auto sched = afc::simulate_block_schedule(c);
            w.row(std::vector<Field>{afc::to_string(c.protocol), sched.usable_slots, r.dead_time_fraction,
                                     r.effective_modes, r.analytic_rate, r.monte_carlo_rate,
                                     r.monte_carlo_std_error});
        }
    });
    out.write("repeater.gp", [&](std::ostream &os) {
        os << gp_header("repeater_rates.png", "Entanglement generation rate")
           << "set style data histogram\nset style fill solid 0.6\nset ylabel 'rate [Hz]'\n"
              "plot 'rates.csv' using 5:xtic(1) skip 1 title 'analytic', '' using 6 skip 1 title 'Monte Carlo'\n";
    });

    json s;
    s["trains"] = trains.size();
    s["control_pulses"] = pulses.size();
    json corrupted = json::array();
    for (const auto &t : schedule.trains) {
        if (t.state == afc::TrainState::Corrupted) {
            corrupted.push_back(t.id);
        }
    }
    s["corrupted_trains"] = corrupted;
    s["conflicts"] = schedule.conflicts.size();
    s["max_conflict_free_block"] = afc::max_conflict_free_block(rc.optical_storage_time, rc.mode_duration);
    for (const auto &[c, r] : rates) {
        json j;
        j["analytic_rate_Hz"] = r.analytic_rate;
        j["monte_carlo_rate_Hz"] = r.monte_carlo_rate;
        j["monte_carlo_std_error_Hz"] = r.monte_carlo_std_error;
        j["effective_modes"] = r.effective_modes;
        s["rate_" + afc::to_string(c.protocol)] = j;
    }
    s["configured_protocol"] = afc::to_string(rc.protocol);
    return s;
}

json g2_run(const ExperimentConfig &cfg, Staging &out, unsigned threads)
{
    auto model = cfg.pair_source();
    const bool memory = cfg.flag("g2", "memory");
    if (memory) {
        model = afc::with_memory(model, cfg.number("g2", "memory_efficiency"), cfg.number("g2", "memory_background"));
    }
    const auto counts = afc::simulate_counts(model, cfg.integer("g2", "n_windows"), cfg.seed(), threads);
    const auto est = afc::g2_from_counts(counts);
    const double expected = afc::expected_g2(model);
    const bool nonclassical = afc::classicality_check(est.g2);

    out.write("g2.csv", [&](std::ostream &os) {
        afc::csv::Writer w(os, {"n_windows", "singles_herald", "singles_signal", "coincidences", "g2", "g2_std_error",
                                "expected_g2", "classical_bound_passed"});
        w.row(std::vector<Field>{counts.n_windows, counts.singles_herald, counts.singles_signal, counts.coincidences,
                                 est.g2, est.std_error, expected, static_cast<long long>(nonclassical ? 1 : 0)});
    });
    out.write("g2.gp", [&](std::ostream &os) {
        os << gp_header("g2.png", "Cross-correlation g2")
           << "set ylabel 'g2'\nset yrange [0:*]\nset xrange [-1:1]\nunset xtics\n"
              "plot 'g2.csv' using (0):5:6 skip 1 with yerrorbars pt 7 title 'estimate', \\\n"
              "     2 with lines dt 2 title 'classical bound'\n";
    });

    json s;
    s["memory"] = memory;
    s["n_windows"] = counts.n_windows;
    s["singles_herald"] = counts.singles_herald;
    s["singles_signal"] = counts.singles_signal;
    s["coincidences"] = counts.coincidences;
    s["g2"] = est.g2;
    s["std_error"] = est.std_error;
    s["expected_g2"] = expected;
    s["classical_bound_passed"] = nonclassical;
    return s;
}

} // namespace

RunReport run(const std::string &subcommand, const ExperimentConfig &config, const fs::path &out_dir,
              const RunOptions &options)
{
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), subcommand) == std::end(kSubcommands)) {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    config.validate();
    const unsigned threads = std::max(1u, options.threads);

    Staging out(out_dir);
    RunReport report;
    report.version = version();
    report.subcommand = subcommand;
    report.seed = config.seed();
    report.config = config;

    if (subcommand == "comb") {
        report.summary = comb_run(config, out);
    } else if (subcommand == "sweep") {
        report.summary = sweep_run(config, out, threads);
    } else if (subcommand == "echo-fit") {
        report.summary = echo_fit_run(config, out);
    } else if (subcommand == "multiplex") {
        report.summary = multiplex_run(config, out);
    } else if (subcommand == "repeater") {
        report.summary = repeater_run(config, out);
    } else {
        report.summary = g2_run(config, out, threads);
    }

    out.write("config.ini", [&](std::ostream &os) { os << config.to_ini(); });
    report.outputs = out.names();
    report.outputs.emplace_back("report.json");
    out.write("report.json", [&](std::ostream &os) { os << report.to_json().dump(2) << '\n'; });
    out.commit();
    return report;
}

} // namespace afcsim
