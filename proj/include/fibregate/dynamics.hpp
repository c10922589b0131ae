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

// Fixed-step classical RK4 propagators.
//
// Every jump operator maps the single-excitation sector into the zero-excitation
// (dark) sector and annihilates the latter. Under that structure a dyad |a><b|
// evolves exactly as
//
//   rho(t) = a(t) b(t)^+ + J(t),   J(t) = 2 sum_r rate_r \int_0^t O_r a(s) b(s)^+ O_r^+ ds,
//
// with a(t), b(t) propagated by H_eff = H - i sum_r rate_r O_r^+ O_r, and J supported
// on the landing (dark) rows only. propagate_family() integrates the kets and the
// feed J together; propagate_density() is the plain D x D Lindblad integrator.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "fibregate/model.hpp"
#include "fibregate/types.hpp"

namespace fibregate {

struct IntegratorConfig {
    double dt = 1e-3;          // units of 1/g
    int checkpoint_stride = 64; // steps between finiteness checks

    void validate() const;
    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

using SparseMatrix = Eigen::SparseMatrix<cplx>;

// H - i sum_r rate_r O_r^+ O_r, pruned to its nonzeros.
SparseMatrix effective_hamiltonian(const Matrix& h, const std::vector<JumpOperator>& jumps);

Vector propagate_state(const Matrix& h, const std::vector<JumpOperator>& jumps, const Vector& psi0,
                       double t, const IntegratorConfig& cfg = {});

// Evolution of a <dark|-column of rho: identical generator to propagate_state.
Vector propagate_coherence_block(const Matrix& h, const std::vector<JumpOperator>& jumps,
                                 const Vector& v0, double t, const IntegratorConfig& cfg = {});

// Full master equation
//   d rho/dt = -i[H, rho] + sum_r rate_r (2 O rho O^+ - O^+ O rho - rho O^+ O).
// rho0 must be Hermitian with unit trace.
Matrix propagate_density(const Matrix& h, const std::vector<JumpOperator>& jumps,
                         const Matrix& rho0, double t, const IntegratorConfig& cfg = {});

struct FamilySnapshot {
    double time = 0.0;
    Matrix kets;      // D x m, column p is ket p at `time`
    Matrix dark_feed; // (m*L) x (m*L); entry (p*L + x, q*L + y) is J_pq(landing[x], landing[y])
};

struct FamilyTrajectory {
    std::vector<int> landing; // basis rows reachable by a jump
    std::vector<FamilySnapshot> snapshots;

    // Dyad rho_pq(t) = ket_p ket_q^+ + J_pq as a D x D matrix (test/diagnostic use).
    Matrix dyad(std::size_t snapshot, int p, int q) const;
};

// Propagates the columns of kets0 jointly and records them at each of `times`
// (ascending, >= 0).
FamilyTrajectory propagate_family(const Matrix& h, const std::vector<JumpOperator>& jumps,
                                  const Matrix& kets0, std::span<const double> times,
                                  const IntegratorConfig& cfg = {});

} // namespace fibregate
