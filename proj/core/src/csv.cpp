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

#include "afcmem/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace afc::csv {

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

std::string quote(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

Writer::Writer(std::ostream &out, const std::vector<std::string> &header)
    : out_(out), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << quote(header[i]);
    }
    out_ << "\r\n";
}

void Writer::row(const std::vector<Field> &fields)
{
    if (fields.size() != columns_) {
        throw std::invalid_argument("csv row has wrong number of fields");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out_ << ',';
        }
        std::visit(
            [this](const auto &v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    out_ << format_double(v);
                } else if constexpr (std::is_same_v<T, long long>) {
                    out_ << v;
                } else {
                    out_ << quote(v);
                }
            },
            fields[i]);
    }
    out_ << "\r\n";
}

void Writer::row(std::initializer_list<double> values)
{
    std::vector<Field> fields(values.begin(), values.end());
    row(fields);
}

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::invalid_argument("csv: missing column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

Table read_numeric(std::istream &in)
{
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = split(line);
        if (!have_header) {
            table.header = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw std::invalid_argument("csv: ragged row '" + line + "'");
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto &f : fields) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw std::invalid_argument("csv: non-numeric field '" + f + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw std::invalid_argument("csv: empty input");
    }
    return table;
}

Table read_numeric_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("csv: cannot open " + path);
    }
    return read_numeric(in);
}

} // namespace afc::csv
