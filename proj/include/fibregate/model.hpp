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
#include <variant>
#include <vector>

#include "fibregate/hilbert.hpp"
#include "fibregate/types.hpp"

namespace fibregate {

// Loss rates in units of g, entering the master equation as
//   kappa * sum_k L[a_k] + gamma_atom * sum_k L[sigma_k^-] + gamma_fibre * sum_j L[b_j]
// with L[o]rho = 2 o rho o^+ - o^+ o rho - rho o^+ o, so a lone excitation with
// rate r decays in population as exp(-2 r t).
struct LossRates {
    double kappa = 0.0;
    double gamma_atom = 0.0;
    double gamma_fibre = 0.0;

    static LossRates uniform(double r) { return {r, r, r}; }
    bool lossless() const { return kappa == 0.0 && gamma_atom == 0.0 && gamma_fibre == 0.0; }
    friend bool operator==(const LossRates&, const LossRates&) = default;
};

// All quantities in units of the reference coupling g.
struct ModelParams {
    cplx g1{1.0, 0.0};
    cplx g2{1.0, 0.0};
    cplx v1{1.0, 0.0};
    cplx v2{1.0, 0.0};
    std::vector<double> detunings;
    LossRates losses;

    // g1 = v1 = 1, g2 = 1 + delta_g, v2 = 1 + delta_v.
    static ModelParams from_offsets(double delta_g, double delta_v, std::vector<double> detunings,
                                    LossRates losses = {});

    int n_fibre() const { return static_cast<int>(detunings.size()); }
    double delta_g() const { return g2.real() - 1.0; }
    double delta_v() const { return v2.real() - 1.0; }

    void validate() const; // throws ConfigError
};

struct JumpOperator {
    double rate = 0.0;
    Matrix matrix;
    std::string label;
};

Matrix build_hamiltonian(const ModelParams& params, const Basis& basis);

// Order: a1, a2 (kappa), sigma_1^-, sigma_2^- (gamma_atom), b_1..b_N (gamma_fibre).
std::vector<JumpOperator> build_jump_operators(const ModelParams& params, const Basis& basis);

// Fibre-number operator sum_j b_j^+ b_j over the basis.
Matrix fibre_number_operator(const Basis& basis);

// Fibre spectra ---------------------------------------------------------------

struct TwoModes {
    double delta;
};
// count points uniformly over [lo, hi], both ends included.
struct Band {
    double lo;
    double hi;
    int count;
};
// Band over [lo, hi] plus its mirror image over [-hi, -lo].
struct BandPair {
    double lo;
    double hi;
    int count_per_side;
};
struct Explicit {
    std::vector<double> values;
};
using SpectrumPreset = std::variant<TwoModes, Band, BandPair, Explicit>;

std::vector<double> detunings(const SpectrumPreset& preset);

// Arguments consumed by the parameterised presets ("fig3" needs delta,
// "fig9a"/"fig9b" need shift and modes).
struct PresetArgs {
    double delta = 0.1;
    double shift = 0.0;
    int modes = 2;
    friend bool operator==(const PresetArgs&, const PresetArgs&) = default;
};

// Stable ids: fig3 fig5a fig5b fig6a fig6b fig8 fig8_split fig9a fig9b fig10a fig10b.
std::vector<double> spectrum_preset(std::string_view id, const PresetArgs& args = {});
bool is_known_preset(std::string_view id);
const std::vector<std::string>& preset_ids();

// Fibre length whose free spectral range c*pi/l equals spacing_in_g * g_hz.
double fibre_length_for_spacing(double spacing_in_g, double g_hz);

} // namespace fibregate
