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

#include "afcmem/comb.hpp"
#include "afcmem/memory.hpp"
#include "afcmem/multiplex.hpp"
#include "afcmem/quantumstats.hpp"
#include "afcmem/repeater.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace afcsim {

/// Bad configuration: names the offending key and the violated constraint.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

using Section = std::map<std::string, std::string>;

/// Every value of every section, defaults filled in. Section names are fixed except for the
/// per-item sections "train:<id>" and "control:<name>" used by the repeater scenario.
class ExperimentConfig {
  public:
    static ExperimentConfig defaults();
    static ExperimentConfig parse(std::istream &in, const std::string &origin = "<config>");
    static ExperimentConfig load(const std::filesystem::path &path);

    const std::map<std::string, Section> &sections() const { return sections_; }
    const std::string &raw(const std::string &section, const std::string &key) const;

    /// Directory that relative paths in the config are resolved against.
    std::filesystem::path base_dir;

    double number(const std::string &section, const std::string &key) const;
    long long integer(const std::string &section, const std::string &key) const;
    bool flag(const std::string &section, const std::string &key) const;
    std::string text(const std::string &section, const std::string &key) const;
    /// Empty string stays empty; anything else is resolved against base_dir.
    std::filesystem::path path(const std::string &section, const std::string &key) const;

    std::uint64_t seed() const;
    void set_seed(std::uint64_t seed);

    afc::CombSpec comb() const;
    afc::DecoherenceModel decoherence() const;
    afc::StorageOptions storage_options() const;
    afc::SweepOptions sweep_options() const;
    std::vector<double> sweep_taus() const;
    afc::ChannelPlan plan() const;
    afc::FilterCavity cavity() const;
    afc::FeedforwardRun feedforward() const;
    afc::RepeaterConfig repeater() const;
    std::vector<afc::QubitTrain> trains() const;
    std::vector<afc::ControlPulse> control_pulses() const;
    afc::PairSourceModel pair_source() const;

    /// Checks every section against the types' invariants.
    void validate() const;

    /// INI text that parses back to this configuration.
    std::string to_ini() const;

  private:
    std::map<std::string, Section> sections_;
};

/// The documented default configuration, as commented INI.
std::string defaults_text();

} // namespace afcsim
