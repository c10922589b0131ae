// Copyright 2026 The fibregate Authors
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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "fibregate/sweep.hpp"

namespace fibregate {

std::string format_csv_row(const SweepRow& row) {
    std::string out = fmt::format("{},{},{},{:.6f},", row.delta_g, row.delta_v, row.time, row.fidelity);
    if (row.stderr_of_mean) out += fmt::format("{:.6f}", *row.stderr_of_mean);
    out += ',';
    if (row.n_samples) out += fmt::format("{}", *row.n_samples);
    return out;
}

void write_csv(std::ostream& os, const SweepResult& result) {
    os << kCsvHeader << '\n';
    for (const auto& row : result.rows) os << format_csv_row(row) << '\n';
}

namespace {

double parse_double(const std::string& field, int line, const char* column) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size()) {
        throw ConfigError(fmt::format("line {}: column {} is not a number: '{}'", line, column, field));
    }
    return v;
}

} // namespace

std::vector<SweepRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw ConfigError(fmt::format("line 1: expected header '{}'", kCsvHeader));
    }
    std::vector<SweepRow> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 6) {
            throw ConfigError(fmt::format("line {}: expected 6 columns, found {}", lineno, f.size()));
        }
        SweepRow r;
        r.delta_g = parse_double(f[0], lineno, "delta_g");
        r.delta_v = parse_double(f[1], lineno, "delta_v");
        r.time = parse_double(f[2], lineno, "time");
        r.fidelity = parse_double(f[3], lineno, "fidelity");
        if (!f[4].empty()) r.stderr_of_mean = parse_double(f[4], lineno, "stderr");
        if (!f[5].empty()) r.n_samples = static_cast<int>(parse_double(f[5], lineno, "n_samples"));
        rows.push_back(r);
    }
    return rows;
}

} // namespace fibregate
