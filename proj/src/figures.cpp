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

#include "fibregate/figures.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace fibregate {

namespace {

constexpr double kLossy = 1e-2;

GridSpec surface(std::vector<double> detunings, double time, double rate = 0.0) {
    GridSpec g;
    g.detunings = std::move(detunings);
    g.times = {time};
    g.losses = LossRates::uniform(rate);
    return g;
}

std::vector<FigureRun> shifted_series(std::string_view id, double spacing) {
    std::vector<FigureRun> runs;
    for (int modes : {2, 30}) {
        for (double shift : {0.0, spacing}) {
            FigureRun r;
            r.name = fmt::format("{}_n{}_shift{}", id, modes, shift);
            r.spec.detunings = spectrum_preset(id, PresetArgs{0.0, shift, modes});
            r.spec.times = Range{0.0, 8.0, 0.02}.values();
            r.spec.delta_g = Range::single(0.9);
            r.spec.delta_v = Range::single(0.0);
            r.series = true;
            r.series_delta_g = 0.9;
            r.series_delta_v = 0.0;
            runs.push_back(std::move(r));
        }
    }
    return runs;
}

} // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {
        "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "mingap", "fig5a",  "fig5b",
        "fig6a", "fig6b", "fig7a", "fig7b", "fig8a", "fig8b", "fig9a",  "fig9b", "fig10a", "fig10b"};
    return ids;
}

std::vector<FigureRun> figure_runs(std::string_view id) {
    const auto two = [](double delta) { return spectrum_preset("fig3", PresetArgs{delta, 0.0, 2}); };
    const auto one = [&](GridSpec spec) { return std::vector<FigureRun>{{std::string(id), std::move(spec)}}; };

    if (id == "fig3a") return one(surface(two(0.1), 4.6));
    if (id == "fig3b") return one(surface(two(0.2), 4.56));
    if (id == "fig3c") return one(surface(two(0.3), 4.54));
    if (id == "fig4a") return one(surface(two(0.1), 4.6, kLossy));
    if (id == "fig4b") return one(surface(two(0.2), 4.56, kLossy));
    if (id == "fig4c") return one(surface(two(0.3), 4.54, kLossy));
    if (id == "mingap") {
        GridSpec g = surface(two(0.45), 4.4);
        g.times = Range{4.4, 4.7, 0.02}.values();
        return one(std::move(g));
    }
    if (id == "fig5a") return one(surface(spectrum_preset("fig5a"), 4.3));
    if (id == "fig5b") return one(surface(spectrum_preset("fig5b"), 4.3));
    if (id == "fig6a") return one(surface(spectrum_preset("fig6a"), 4.48));
    if (id == "fig6b") return one(surface(spectrum_preset("fig6b"), 4.48));
    if (id == "fig7a") return one(surface(spectrum_preset("fig6a"), 4.48, kLossy));
    if (id == "fig7b") return one(surface(spectrum_preset("fig6b"), 4.48, kLossy));
    if (id == "fig8a") return one(surface(spectrum_preset("fig8"), 4.48));
    if (id == "fig8b") return one(surface(spectrum_preset("fig8"), 4.48, kLossy));
    if (id == "fig9a") return shifted_series(id, 0.2);
    if (id == "fig9b") return shifted_series(id, 0.9);
    if (id == "fig10a") return one(surface(spectrum_preset("fig10a"), 4.3));
    if (id == "fig10b") return one(surface(spectrum_preset("fig10b"), 4.3));
    throw ConfigError(fmt::format("unknown figure '{}'", id));
}

} // namespace fibregate
