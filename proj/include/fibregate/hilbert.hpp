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

// Truncated Hilbert space of two atoms, two cavities and N fibre modes holding
// at most one excitation in total.
//
// Canonical order (D = 2N + 9):
//   0            (g,g; vac)           dark sector
//   1            (g,s; vac)
//   2            (e,g; vac)           g-branch, N + 4 states
//   3            (g,g; a1)
//   4 .. N+3     (g,g; b_j)
//   N+4          (g,g; a2)
//   N+5          (g,e; vac)
//   N+6          (e,s; vac)           s-branch, N + 3 states
//   N+7          (g,s; a1)
//   N+8 .. 2N+7  (g,s; b_j)
//   2N+8         (g,s; a2)

#include <array>
#include <optional>
#include <vector>

#include "fibregate/types.hpp"

namespace fibregate {

enum class Atom1 { g, e };
enum class Atom2 { g, s, e };

struct AtomicLabel {
    Atom1 atom1 = Atom1::g;
    Atom2 atom2 = Atom2::g;

    int excitation() const { return (atom1 == Atom1::e) + (atom2 == Atom2::e); }
    friend bool operator==(const AtomicLabel&, const AtomicLabel&) = default;
};

enum class Mode { vacuum, cavity1, fibre, cavity2 };

struct FieldLabel {
    Mode mode = Mode::vacuum;
    int fibre = -1; // 0-based fibre index when mode == Mode::fibre

    static FieldLabel vacuum() { return {}; }
    static FieldLabel cavity(int k) { return {k == 1 ? Mode::cavity1 : Mode::cavity2, -1}; }
    static FieldLabel fibre_mode(int j) { return {Mode::fibre, j}; }

    int photons() const { return mode == Mode::vacuum ? 0 : 1; }
    friend bool operator==(const FieldLabel&, const FieldLabel&) = default;
};

struct BasisState {
    AtomicLabel atomic;
    FieldLabel field;

    int excitation() const { return atomic.excitation() + field.photons(); }
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

// Row/column order of the reduced atomic space returned by the field trace.
enum AtomicIndex : int { kGG = 0, kGS = 1, kEG = 2, kES = 3, kGE = 4, kEE = 5 };
inline constexpr int kAtomicDim = 6;
using AtomicDensity = Eigen::Matrix<cplx, kAtomicDim, kAtomicDim>;

int atomic_index(const AtomicLabel& label);

struct IndexRange {
    int begin = 0;
    int end = 0;
    int size() const { return end - begin; }
    bool contains(int i) const { return i >= begin && i < end; }
};

class Basis {
public:
    explicit Basis(int n_fibre);

    int n_fibre() const { return n_fibre_; }
    int dimension() const { return static_cast<int>(states_.size()); }

    const BasisState& state_at(int i) const;
    std::optional<int> find(const BasisState& state) const;
    int index_of(const BasisState& state) const; // throws std::out_of_range

    IndexRange dark() const { return {0, 2}; }
    IndexRange g_branch() const { return {2, n_fibre_ + 6}; }
    IndexRange s_branch() const { return {n_fibre_ + 6, 2 * n_fibre_ + 9}; }

    static constexpr int kDarkGG = 0;
    static constexpr int kDarkGS = 1;
    static constexpr int kHeadEG = 2;
    int head_es() const { return n_fibre_ + 6; }

    // Basis indices sharing one field label, tagged with their atomic row.
    struct FieldGroup {
        FieldLabel field;
        std::vector<std::pair<int, int>> members; // (basis index, atomic index)
    };
    const std::vector<FieldGroup>& field_groups() const { return groups_; }

private:
    int n_fibre_;
    std::vector<BasisState> states_;
    std::vector<FieldGroup> groups_;
};

Basis build_basis(int n_fibre);

// Tr_f over a D x D operator.
AtomicDensity partial_trace_field(const Matrix& rho, const Basis& basis);

// Tr_f |ket><bra| without forming the D x D outer product.
AtomicDensity partial_trace_outer(const Vector& ket, const Vector& bra, const Basis& basis);

} // namespace fibregate
