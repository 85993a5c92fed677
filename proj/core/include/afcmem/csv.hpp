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

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace afc::csv {

/// Shortest round-trip decimal representation; locale independent.
std::string format_double(double value);

/// RFC-4180 field quoting (only when needed).
std::string quote(std::string_view field);

using Field = std::variant<double, long long, std::string>;

class Writer {
  public:
    Writer(std::ostream &out, const std::vector<std::string> &header);
    void row(const std::vector<Field> &fields);
    void row(std::initializer_list<double> values);

  private:
    std::ostream &out_;
    std::size_t columns_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
};

/// Reads a numeric CSV with a header row. Lines starting with '#' are skipped.
Table read_numeric(std::istream &in);
Table read_numeric_file(const std::string &path);

} // namespace afc::csv
