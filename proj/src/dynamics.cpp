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

#include "fibregate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace fibregate {

namespace {

constexpr cplx kMinusI{0.0, -1.0};

// Number of equal RK4 steps covering `span` with steps no longer than dt.
std::size_t step_count(double span, double dt) {
    if (span <= 0.0) return 0;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-9)));
}

void check_square(const Matrix& h, const char* who) {
    if (h.rows() != h.cols()) {
        throw DimensionError(fmt::format("{}: Hamiltonian is {}x{}", who, h.rows(), h.cols()));
    }
}

void check_jumps(const std::vector<JumpOperator>& jumps, Eigen::Index d, const char* who) {
    for (const auto& j : jumps) {
        if (j.matrix.rows() != d || j.matrix.cols() != d) {
            throw DimensionError(fmt::format("{}: jump '{}' is {}x{}, expected {}x{}", who, j.label,
                                             j.matrix.rows(), j.matrix.cols(), d, d));
        }
        if (!(j.rate >= 0.0)) {
            throw ConfigError(fmt::format("{}: jump '{}' has negative rate", who, j.label));
        }
    }
}

void check_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(fmt::format("{}: time must be finite and >= 0 (got {})", who, t));
    }
}

template <class Derived>
void check_finite(const Eigen::MatrixBase<Derived>& m, std::size_t step, const char* who) {
    if (!m.allFinite()) {
        throw PropagationError(fmt::format("{}: non-finite amplitudes at step {}", who, step), step);
    }
}

struct ActiveJump {
    double rate;
    SparseMatrix op;
};

std::vector<ActiveJump> active_jumps(const std::vector<JumpOperator>& jumps) {
    std::vector<ActiveJump> out;
    for (const auto& j : jumps) {
        if (j.rate > 0.0) out.push_back({j.rate, j.matrix.sparseView()});
    }
    return out;
}

Vector evolve_ket(const Matrix& h, const std::vector<JumpOperator>& jumps, const Vector& psi0,
                  double t, const IntegratorConfig& cfg, const char* who) {
    cfg.validate();
    check_square(h, who);
    check_jumps(jumps, h.rows(), who);
    check_time(t, who);
    if (psi0.size() != h.rows()) {
        throw DimensionError(
            fmt::format("{}: state has length {}, Hamiltonian is {}", who, psi0.size(), h.rows()));
    }

    const SparseMatrix heff = effective_hamiltonian(h, jumps);
    const std::size_t n = step_count(t, cfg.dt);
    const double dt = n ? t / static_cast<double>(n) : 0.0;

    Vector psi = psi0;
    Vector k1, k2, k3, k4;
    for (std::size_t step = 0; step < n; ++step) {
        k1 = kMinusI * (heff * psi);
        k2 = kMinusI * (heff * (psi + (0.5 * dt) * k1));
        k3 = kMinusI * (heff * (psi + (0.5 * dt) * k2));
        k4 = kMinusI * (heff * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((step + 1) % static_cast<std::size_t>(cfg.checkpoint_stride) == 0) {
            check_finite(psi, step + 1, who);
        }
    }
    check_finite(psi, n, who);
    return psi;
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError(fmt::format("integrator dt must be positive (got {})", dt));
    }
    if (checkpoint_stride < 1) throw ConfigError("checkpoint_stride must be >= 1");
}

SparseMatrix effective_hamiltonian(const Matrix& h, const std::vector<JumpOperator>& jumps) {
    Matrix heff = h;
    for (const auto& j : jumps) {
        if (j.rate > 0.0) heff.noalias() += kMinusI * j.rate * (j.matrix.adjoint() * j.matrix);
    }
    SparseMatrix out = heff.sparseView(cplx{0.0}, 0.0);
    out.makeCompressed();
    return out;
}

Vector propagate_state(const Matrix& h, const std::vector<JumpOperator>& jumps, const Vector& psi0,
                       double t, const IntegratorConfig& cfg) {
    return evolve_ket(h, jumps, psi0, t, cfg, "propagate_state");
}

Vector propagate_coherence_block(const Matrix& h, const std::vector<JumpOperator>& jumps,
                                 const Vector& v0, double t, const IntegratorConfig& cfg) {
    return evolve_ket(h, jumps, v0, t, cfg, "propagate_coherence_block");
}

Matrix propagate_density(const Matrix& h, const std::vector<JumpOperator>& jumps,
                         const Matrix& rho0, double t, const IntegratorConfig& cfg) {
    constexpr const char* who = "propagate_density";
    cfg.validate();
    check_square(h, who);
    check_jumps(jumps, h.rows(), who);
    check_time(t, who);
    if (rho0.rows() != h.rows() || rho0.cols() != h.cols()) {
        throw DimensionError(fmt::format("{}: rho is {}x{}, Hamiltonian is {}x{}", who, rho0.rows(),
                                         rho0.cols(), h.rows(), h.cols()));
    }
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("propagate_density: initial state is not Hermitian");
    }
    if (std::abs(rho0.trace() - 1.0) > 1e-9) {
        throw std::invalid_argument("propagate_density: initial state does not have unit trace");
    }

    const SparseMatrix heff = effective_hamiltonian(h, jumps);
    const auto active = active_jumps(jumps);

    // -i H_eff rho + h.c. + 2 sum_r rate_r O rho O^+, Hermitian for Hermitian rho.
    Matrix a, b;
    const auto rhs = [&](const Matrix& rho, Matrix& out) {
        a.noalias() = kMinusI * (heff * rho);
        out = a + a.adjoint();
        for (const auto& j : active) {
            b.noalias() = j.op * rho;                                   // O rho
            out.noalias() += (2.0 * j.rate) * (j.op * b.adjoint()).eval(); // O (O rho)^+ = O rho O^+
        }
    };

    const std::size_t n = step_count(t, cfg.dt);
    const double dt = n ? t / static_cast<double>(n) : 0.0;
    Matrix rho = rho0;
    Matrix k1, k2, k3, k4;
    for (std::size_t step = 0; step < n; ++step) {
        rhs(rho, k1);
        rhs(rho + (0.5 * dt) * k1, k2);
        rhs(rho + (0.5 * dt) * k2, k3);
        rhs(rho + dt * k3, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((step + 1) % static_cast<std::size_t>(cfg.checkpoint_stride) == 0) {
            check_finite(rho, step + 1, who);
        }
    }
    check_finite(rho, n, who);
    return rho;
}

Matrix FamilyTrajectory::dyad(std::size_t snapshot, int p, int q) const {
    const auto& s = snapshots.at(snapshot);
    Matrix rho = s.kets.col(p) * s.kets.col(q).adjoint();
    const auto l = static_cast<int>(landing.size());
    for (int x = 0; x < l; ++x) {
        for (int y = 0; y < l; ++y) rho(landing[x], landing[y]) += s.dark_feed(p * l + x, q * l + y);
    }
    return rho;
}

FamilyTrajectory propagate_family(const Matrix& h, const std::vector<JumpOperator>& jumps,
                                  const Matrix& kets0, std::span<const double> times,
                                  const IntegratorConfig& cfg) {
    constexpr const char* who = "propagate_family";
    cfg.validate();
    check_square(h, who);
    check_jumps(jumps, h.rows(), who);
    if (kets0.rows() != h.rows()) {
        throw DimensionError(
            fmt::format("{}: kets have {} rows, Hamiltonian is {}", who, kets0.rows(), h.rows()));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        check_time(times[i], who);
        if (i > 0 && times[i] < times[i - 1]) {
            throw std::invalid_argument("propagate_family: times must be ascending");
        }
    }

    const SparseMatrix heff = effective_hamiltonian(h, jumps);
    const auto active = active_jumps(jumps);

    FamilyTrajectory traj;
    {
        std::set<int> rows;
        for (const auto& j : active) {
            for (int k = 0; k < j.op.outerSize(); ++k) {
                for (SparseMatrix::InnerIterator it(j.op, k); it; ++it) rows.insert(it.row());
            }
        }
        traj.landing.assign(rows.begin(), rows.end());
    }
    const auto l = static_cast<Eigen::Index>(traj.landing.size());
    const auto m = kets0.cols();

    // All jump operators restricted to their landing rows and stacked, row x * n_jumps + j holding
    // sqrt(2 r_j) <landing_x| O_j. Viewed as n_jumps x (L m), the product P kets is a matrix whose
    // Gram matrix M^T conj(M) is the feed rate sum_j 2 r_j vec(O_j K) vec(O_j K)^+.
    const auto nj = static_cast<Eigen::Index>(active.size());
    std::vector<Eigen::Index> landing_pos(h.rows(), -1);
    for (Eigen::Index x = 0; x < l; ++x) landing_pos[traj.landing[x]] = x;
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Eigen::Index j = 0; j < nj; ++j) {
        const double scale = std::sqrt(2.0 * active[j].rate);
        for (int k = 0; k < active[j].op.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(active[j].op, k); it; ++it) {
                entries.emplace_back(landing_pos[it.row()] * nj + j, it.col(), scale * it.value());
            }
        }
    }
    SparseMatrix stacked(l * nj, h.rows());
    stacked.setFromTriplets(entries.begin(), entries.end());
    stacked.makeCompressed();

    Matrix w_block(l * nj, m);
    const auto feed_rate = [&](const Matrix& kets, Matrix& out) {
        w_block.noalias() = stacked * kets;
        const Eigen::Map<const Matrix> w(w_block.data(), nj, l * m);
        out.noalias() = w.transpose() * w.conjugate();
    };

    Matrix kets = kets0;
    Matrix feed = Matrix::Zero(l * m, l * m);
    Matrix k1, k2, k3, k4, f1, f2, f3, f4, stage;
    double now = 0.0;
    std::size_t total_steps = 0;

    for (double target : times) {
        const std::size_t n = step_count(target - now, cfg.dt);
        const double dt = n ? (target - now) / static_cast<double>(n) : 0.0;
        for (std::size_t step = 0; step < n; ++step) {
            k1.noalias() = kMinusI * (heff * kets);
            feed_rate(kets, f1);
            stage = kets + (0.5 * dt) * k1;
            k2.noalias() = kMinusI * (heff * stage);
            feed_rate(stage, f2);
            stage = kets + (0.5 * dt) * k2;
            k3.noalias() = kMinusI * (heff * stage);
            feed_rate(stage, f3);
            stage = kets + dt * k3;
            k4.noalias() = kMinusI * (heff * stage);
            feed_rate(stage, f4);
            kets += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (l > 0) feed += (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
            ++total_steps;
            if (total_steps % static_cast<std::size_t>(cfg.checkpoint_stride) == 0) {
                check_finite(kets, total_steps, who);
            }
        }
        check_finite(kets, total_steps, who);
        now = target;
        traj.snapshots.push_back({target, kets, feed});
    }
    return traj;
}

} // namespace fibregate
