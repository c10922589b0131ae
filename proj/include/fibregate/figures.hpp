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

#include <string>
#include <string_view>
#include <vector>

#include "fibregate/sweep.hpp"

namespace fibregate {

// One CSV worth of work behind a figure id.
struct FigureRun {
    std::string name; // output stem, e.g. "fig3a" or "fig9a_n30_shift0.2"
    GridSpec spec;
    bool series = false; // time series at (series_delta_g, series_delta_v)
    double series_delta_g = 0.0;
    double series_delta_v = 0.0;
};

// Ids: fig3a-c, fig4a-c, mingap, fig5a-b, fig6a-b, fig7a-b, fig8a-b, fig9a-b, fig10a-b.
std::vector<FigureRun> figure_runs(std::string_view id);
const std::vector<std::string>& figure_ids();

} // namespace fibregate
