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

#include "fibregate/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace fibregate {

ModelParams ModelParams::from_offsets(double delta_g, double delta_v, std::vector<double> detunings,
                                      LossRates losses) {
    ModelParams p;
    p.g2 = cplx{1.0 + delta_g, 0.0};
    p.v2 = cplx{1.0 + delta_v, 0.0};
    p.detunings = std::move(detunings);
    p.losses = losses;
    return p;
}

void ModelParams::validate() const {
    if (detunings.empty()) throw ConfigError("at least one fibre mode is required");
    for (double d : detunings) {
        if (!std::isfinite(d)) throw ConfigError("fibre detunings must be finite");
    }
    const auto check_rate = [](double r, const char* name) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ConfigError(fmt::format("{} must be a finite nonnegative rate (got {})", name, r));
        }
    };
    check_rate(losses.kappa, "kappa");
    check_rate(losses.gamma_atom, "gamma_atom");
    check_rate(losses.gamma_fibre, "gamma_fibre");
    for (cplx c : {g1, g2, v1, v2}) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ConfigError("couplings must be finite");
        }
    }
}

namespace {

void check_shape(const ModelParams& params, const Basis& basis, const char* who) {
    if (params.n_fibre() != basis.n_fibre()) {
        throw DimensionError(fmt::format("{}: {} detunings for a basis with {} fibre modes", who,
                                         params.n_fibre(), basis.n_fibre()));
    }
}

// Adds c * |row><col| + conj(c) * |col><row|.
void couple(Matrix& h, int row, int col, cplx c) {
    h(row, col) += c;
    h(col, row) += std::conj(c);
}

} // namespace

Matrix build_hamiltonian(const ModelParams& params, const Basis& basis) {
    check_shape(params, basis, "build_hamiltonian");
    const int n = basis.n_fibre();
    Matrix h = Matrix::Zero(basis.dimension(), basis.dimension());

    // Each branch is the chain  atom1 -- a1 -- {b_j} -- a2 [-- atom2].
    // g_k a_k |e><g|_k maps |g; a_k> to g_k |e; vac>, so <e|H|a_k> = g_k.
    // v_k b_j a_k^+ maps |b_j> to v_k |a_k>, so <a_k|H|b_j> = v_k.
    for (const Atom2 spectator : {Atom2::g, Atom2::s}) {
        const AtomicLabel ground{Atom1::g, spectator};
        const int a1 = basis.index_of({ground, FieldLabel::cavity(1)});
        const int a2 = basis.index_of({ground, FieldLabel::cavity(2)});
        const int e1 = basis.index_of({{Atom1::e, spectator}, FieldLabel::vacuum()});

        couple(h, e1, a1, params.g1);
        for (int j = 0; j < n; ++j) {
            const int b = basis.index_of({ground, FieldLabel::fibre_mode(j)});
            h(b, b) = params.detunings[j];
            couple(h, a1, b, params.v1);
            couple(h, a2, b, params.v2);
        }
        if (spectator == Atom2::g) {
            const int e2 = basis.index_of({{Atom1::g, Atom2::e}, FieldLabel::vacuum()});
            couple(h, e2, a2, params.g2);
        }
    }
    return h;
}

std::vector<JumpOperator> build_jump_operators(const ModelParams& params, const Basis& basis) {
    check_shape(params, basis, "build_jump_operators");
    const int d = basis.dimension();
    const int n = basis.n_fibre();

    // Sends every basis state for which `lower` yields a state to that state.
    const auto lowering = [&](auto&& lower) {
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            if (auto target = lower(basis.state_at(i))) m(basis.index_of(*target), i) = 1.0;
        }
        return m;
    };
    const auto field_lowering = [&](FieldLabel mode) {
        return lowering([mode](const BasisState& s) -> std::optional<BasisState> {
            if (!(s.field == mode)) return std::nullopt;
            return BasisState{s.atomic, FieldLabel::vacuum()};
        });
    };

    std::vector<JumpOperator> jumps;
    jumps.reserve(4 + n);
    jumps.push_back({params.losses.kappa, field_lowering(FieldLabel::cavity(1)), "a1"});
    jumps.push_back({params.losses.kappa, field_lowering(FieldLabel::cavity(2)), "a2"});
    jumps.push_back({params.losses.gamma_atom,
                     lowering([](const BasisState& s) -> std::optional<BasisState> {
                         if (s.atomic.atom1 != Atom1::e) return std::nullopt;
                         return BasisState{{Atom1::g, s.atomic.atom2}, s.field};
                     }),
                     "sigma1"});
    jumps.push_back({params.losses.gamma_atom,
                     lowering([](const BasisState& s) -> std::optional<BasisState> {
                         if (s.atomic.atom2 != Atom2::e) return std::nullopt;
                         return BasisState{{s.atomic.atom1, Atom2::g}, s.field};
                     }),
                     "sigma2"});
    for (int j = 0; j < n; ++j) {
        jumps.push_back({params.losses.gamma_fibre, field_lowering(FieldLabel::fibre_mode(j)),
                         fmt::format("b{}", j + 1)});
    }
    return jumps;
}

Matrix fibre_number_operator(const Basis& basis) {
    Matrix m = Matrix::Zero(basis.dimension(), basis.dimension());
    for (int i = 0; i < basis.dimension(); ++i) {
        if (basis.state_at(i).field.mode == Mode::fibre) m(i, i) = 1.0;
    }
    return m;
}

// Spectra ---------------------------------------------------------------------

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("a band needs at least one mode");
    if (hi < lo) throw ConfigError(fmt::format("band upper edge {} below lower edge {}", hi, lo));
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    out.back() = hi;
    return out;
}

// k * step for k in [k_lo, k_hi]; integer multiples keep shared modes bit-identical
// across presets built on the same comb.
std::vector<double> comb(int k_lo, int k_hi, double step, bool skip_zero) {
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        if (skip_zero && k == 0) continue;
        out.push_back(k * step);
    }
    return out;
}

std::vector<double> centred(int modes, double spacing, double centre) {
    if (modes < 1) throw ConfigError("fig9 presets need at least one mode");
    std::vector<double> out(modes);
    for (int k = 0; k < modes; ++k) out[k] = centre + spacing * (k - 0.5 * (modes - 1));
    return out;
}

std::vector<double> mirrored(const std::vector<double>& side) {
    std::vector<double> out;
    out.reserve(2 * side.size());
    for (double x : side) out.push_back(-x);
    for (double x : side) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

constexpr double kCombStep = 0.03;

} // namespace

std::vector<double> detunings(const SpectrumPreset& preset) {
    std::vector<double> out = std::visit(
        [](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, TwoModes>) {
                return {-std::abs(p.delta), std::abs(p.delta)};
            } else if constexpr (std::is_same_v<T, Band>) {
                return linspace(p.lo, p.hi, p.count);
            } else if constexpr (std::is_same_v<T, BandPair>) {
                return mirrored(linspace(p.lo, p.hi, p.count_per_side));
            } else {
                return p.values;
            }
        },
        preset);
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<std::string>& preset_ids() {
    static const std::vector<std::string> ids = {"fig3",  "fig5a", "fig5b",      "fig6a",
                                                 "fig6b", "fig8",  "fig8_split", "fig9a",
                                                 "fig9b", "fig10a", "fig10b"};
    return ids;
}

bool is_known_preset(std::string_view id) {
    const auto& ids = preset_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::vector<double> spectrum_preset(std::string_view id, const PresetArgs& args) {
    if (id == "fig3") return detunings(TwoModes{args.delta});
    // 31 modes filling the minimum gap with spacing 0.03, with and without the resonant mode.
    if (id == "fig5a") return comb(-15, 15, kCombStep, false);
    if (id == "fig5b") return comb(-15, 15, kCombStep, true);
    // 16 modes per side over [0.45, 0.90], optionally plus the resonant mode.
    if (id == "fig6b") return mirrored(comb(15, 30, kCombStep, false));
    if (id == "fig6a") {
        auto out = mirrored(comb(15, 30, kCombStep, false));
        out.push_back(0.0);
        std::sort(out.begin(), out.end());
        return out;
    }
    // 16 modes over [0.45, 0.90] on one side of resonance.
    if (id == "fig8") return comb(15, 30, kCombStep, false);
    // Alternative: 8 modes per side, endpoints inclusive.
    if (id == "fig8_split") return detunings(BandPair{0.45, 0.90, 8});
    if (id == "fig9a") return centred(args.modes, 0.2, args.shift);
    if (id == "fig9b") return centred(args.modes, 0.9, args.shift);
    if (id == "fig10a") return detunings(Band{-0.45, 0.45, 100});
    // fig5b plus 35 further comb modes on each side.
    if (id == "fig10b") return comb(-50, 50, kCombStep, true);
    throw ConfigError(fmt::format("unknown spectrum preset '{}'", id));
}

double fibre_length_for_spacing(double spacing_in_g, double g_hz) {
    if (!(spacing_in_g > 0.0) || !(g_hz > 0.0)) {
        throw ConfigError("mode spacing and coupling frequency must be positive");
    }
    constexpr double kSpeedOfLight = 299792458.0; // m/s
    return kSpeedOfLight * std::numbers::pi / (spacing_in_g * g_hz);
}

} // namespace fibregate
