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

#include "fibregate/hilbert.hpp"

#include <fmt/format.h>

namespace fibregate {

int atomic_index(const AtomicLabel& label) {
    const bool e1 = label.atom1 == Atom1::e;
    switch (label.atom2) {
    case Atom2::g:
        return e1 ? kEG : kGG;
    case Atom2::s:
        return e1 ? kES : kGS;
    case Atom2::e:
        return e1 ? kEE : kGE;
    }
    return kGG;
}

Basis::Basis(int n_fibre) : n_fibre_(n_fibre) {
    if (n_fibre < 1) {
        throw ConfigError(fmt::format("n_fibre must be >= 1 (got {}): no mediating medium", n_fibre));
    }
    const AtomicLabel gg{Atom1::g, Atom2::g};
    const AtomicLabel gs{Atom1::g, Atom2::s};

    states_.reserve(2 * n_fibre + 9);
    states_.push_back({gg, FieldLabel::vacuum()});
    states_.push_back({gs, FieldLabel::vacuum()});

    states_.push_back({{Atom1::e, Atom2::g}, FieldLabel::vacuum()});
    states_.push_back({gg, FieldLabel::cavity(1)});
    for (int j = 0; j < n_fibre; ++j) states_.push_back({gg, FieldLabel::fibre_mode(j)});
    states_.push_back({gg, FieldLabel::cavity(2)});
    states_.push_back({{Atom1::g, Atom2::e}, FieldLabel::vacuum()});

    states_.push_back({{Atom1::e, Atom2::s}, FieldLabel::vacuum()});
    states_.push_back({gs, FieldLabel::cavity(1)});
    for (int j = 0; j < n_fibre; ++j) states_.push_back({gs, FieldLabel::fibre_mode(j)});
    states_.push_back({gs, FieldLabel::cavity(2)});

    // vacuum, cavity1, fibre 0..N-1, cavity2
    groups_.resize(n_fibre + 3);
    auto group_slot = [n_fibre](const FieldLabel& f) {
        switch (f.mode) {
        case Mode::vacuum:
            return 0;
        case Mode::cavity1:
            return 1;
        case Mode::fibre:
            return 2 + f.fibre;
        case Mode::cavity2:
            return n_fibre + 2;
        }
        return 0;
    };
    for (int i = 0; i < dimension(); ++i) {
        auto& group = groups_[group_slot(states_[i].field)];
        group.field = states_[i].field;
        group.members.emplace_back(i, atomic_index(states_[i].atomic));
    }
}

const BasisState& Basis::state_at(int i) const {
    if (i < 0 || i >= dimension()) {
        throw std::out_of_range(fmt::format("basis index {} outside [0, {})", i, dimension()));
    }
    return states_[i];
}

std::optional<int> Basis::find(const BasisState& state) const {
    if (state.excitation() > 1) return std::nullopt;
    const auto& f = state.field;
    if (f.mode == Mode::fibre && (f.fibre < 0 || f.fibre >= n_fibre_)) return std::nullopt;

    const int n = n_fibre_;
    const auto field_offset = [n](const FieldLabel& field) {
        switch (field.mode) {
        case Mode::cavity1:
            return 0;
        case Mode::fibre:
            return 1 + field.fibre;
        case Mode::cavity2:
            return n + 1;
        case Mode::vacuum:
            break;
        }
        return -1;
    };

    const auto& a = state.atomic;
    if (f.mode == Mode::vacuum) {
        switch (atomic_index(a)) {
        case kGG:
            return kDarkGG;
        case kGS:
            return kDarkGS;
        case kEG:
            return kHeadEG;
        case kGE:
            return n + 5;
        case kES:
            return n + 6;
        default:
            return std::nullopt;
        }
    }
    if (a.atom1 != Atom1::g) return std::nullopt;
    if (a.atom2 == Atom2::g) return 3 + field_offset(f);
    if (a.atom2 == Atom2::s) return n + 7 + field_offset(f);
    return std::nullopt;
}

int Basis::index_of(const BasisState& state) const {
    if (auto i = find(state)) return *i;
    throw std::out_of_range("state is outside the single-excitation basis");
}

Basis build_basis(int n_fibre) { return Basis(n_fibre); }

AtomicDensity partial_trace_field(const Matrix& rho, const Basis& basis) {
    const int d = basis.dimension();
    if (rho.rows() != d || rho.cols() != d) {
        throw DimensionError(fmt::format("partial_trace_field: expected {0}x{0}, got {1}x{2}", d,
                                         rho.rows(), rho.cols()));
    }
    AtomicDensity out = AtomicDensity::Zero();
    for (const auto& group : basis.field_groups()) {
        for (const auto& [i, a] : group.members) {
            for (const auto& [j, b] : group.members) {
                out(a, b) += rho(i, j);
            }
        }
    }
    return out;
}

AtomicDensity partial_trace_outer(const Vector& ket, const Vector& bra, const Basis& basis) {
    const int d = basis.dimension();
    if (ket.size() != d || bra.size() != d) {
        throw DimensionError(fmt::format("partial_trace_outer: expected length {}, got {} and {}",
                                         d, ket.size(), bra.size()));
    }
    AtomicDensity out = AtomicDensity::Zero();
    for (const auto& group : basis.field_groups()) {
        for (const auto& [i, a] : group.members) {
            if (ket[i] == cplx{}) continue;
            for (const auto& [j, b] : group.members) {
                out(a, b) += ket[i] * std::conj(bra[j]);
            }
        }
    }
    return out;
}

} // namespace fibregate
