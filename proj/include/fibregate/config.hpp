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

#pragma once

// Flat key = value run configuration. Optional [section] headers group keys:
//
//   [model]      g1 v1
//   [spectrum]   spectrum delta shift modes detunings
//   [losses]     kappa gamma_atom gamma_fibre
//   [grid]       delta_g delta_v t estimator samples seed dt workers
//   [output]     out threshold
//
// Ranges are written lo:hi:step, lists as comma-separated numbers, strings may be
// double-quoted. '#' starts a comment. Required: spectrum, t (and delta for fig3,
// detunings for an explicit spectrum).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fibregate/model.hpp"
#include "fibregate/sweep.hpp"

namespace fibregate {

class ConfigParseError : public ConfigError {
public:
    ConfigParseError(int line, const std::string& what);
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct RunConfig {
    std::string spectrum;       // preset id or "explicit"
    PresetArgs preset_args;
    std::vector<double> explicit_detunings;
    double g1 = 1.0;
    double v1 = 1.0;
    Range delta_g{-0.5, 2.0, 0.05};
    Range delta_v{-0.5, 2.0, 0.05};
    Range time{4.6, 4.6, 1.0};
    LossRates losses;
    Estimator estimator;
    IntegratorConfig integrator;
    int workers = 0;
    std::string out;
    double threshold = 0.0; // first-peak threshold for time series

    std::vector<double> detunings() const;
    GridSpec grid() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::string_view text);
std::string serialize_config(const RunConfig& cfg);

} // namespace fibregate
