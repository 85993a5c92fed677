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

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"afcsim: atomic frequency comb memory simulations"};
    app.set_version_flag("--version", std::string(afcsim::version()));
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    unsigned threads = 1;
    const std::map<std::string, std::string> about{
        {"comb", "comb profile and a single storage run"},
        {"sweep", "efficiency versus storage time with exponential fit"},
        {"echo-fit", "two-pulse echo decay fit for T2"},
        {"multiplex", "frequency-multiplexed recall through the filter cavity"},
        {"repeater", "spin-wave schedule event log and entanglement rates"},
        {"g2", "heralded cross-correlation from simulated coincidences"},
    };
    std::vector<CLI::App *> subs;
    for (const char *name : afcsim::kSubcommands) {
        auto *sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config_path, "INI configuration file (omit for defaults)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "overrides [run] seed")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", threads, "worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--print-defaults", print_defaults, "print the default configuration and exit");
        subs.push_back(sub);
    }
    app.description(app.get_description() + "\nsubcommands: comb, sweep, echo-fit, multiplex, repeater, g2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    if (print_defaults) {
        std::cout << afcsim::defaults_text();
        return 0;
    }
    CLI::App *chosen = nullptr;
    for (auto *s : subs) {
        if (s->parsed()) {
            chosen = s;
        }
    }
    if (chosen == nullptr) {
        std::cerr << app.help();
        return kExitValidation;
    }
    if (out_dir.empty()) {
        std::cerr << "afcsim: --out is required\n";
        return kExitValidation;
    }

    try {
        auto config =
            config_path.empty() ? afcsim::ExperimentConfig::defaults() : afcsim::ExperimentConfig::load(config_path);
        if (seed >= 0) {
            config.set_seed(static_cast<std::uint64_t>(seed));
        }
        const auto report = afcsim::run(chosen->get_name(), config, out_dir, {threads});
        std::cout << report.to_json()["summary"].dump(2) << '\n';
        return 0;
    } catch (const std::invalid_argument &e) {
        std::cerr << "afcsim: invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "afcsim: error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
