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

#include "afcsim/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace afcsim {

inline constexpr const char *kSubcommands[] = {"comb", "sweep", "echo-fit", "multiplex", "repeater", "g2"};

struct RunReport {
    std::string tool = "afcsim";
    std::string version;
    std::string subcommand;
    std::uint64_t seed = 0;
    ExperimentConfig config;
    /// File names relative to the output directory.
    std::vector<std::string> outputs;
    nlohmann::ordered_json summary;

    nlohmann::ordered_json to_json() const;
};

struct RunOptions {
    unsigned threads = 1;
};

const char *version();

/// Runs one subcommand and writes its CSV files, plot scripts, the resolved configuration
/// (config.ini) and report.json into out_dir. Everything is written to a scratch directory next
/// to out_dir and moved into place at the end, so a failed run leaves nothing behind. An
/// existing out_dir is replaced only if it is empty or holds an earlier afcsim report.
RunReport run(const std::string &subcommand, const ExperimentConfig &config, const std::filesystem::path &out_dir,
              const RunOptions &options = {});

} // namespace afcsim
