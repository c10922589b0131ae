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

#include "fibregate/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace fibregate {

namespace {

constexpr std::array<double, kCodeDim> kCzSigns = {1.0, -1.0, 1.0, 1.0};

AtomicDensity atomic_dyad(int a, int b) {
    AtomicDensity m = AtomicDensity::Zero();
    m(a, b) = 1.0;
    return m;
}

} // namespace

double CodeInput::norm() const {
    double s = 0.0;
    for (const auto& c : amplitudes) s += std::norm(c);
    return std::sqrt(s);
}

CodeInput CodeInput::basis(int i) {
    CodeInput in;
    in.amplitudes.at(i) = 1.0;
    return in;
}

CodeInput haar_sample(SeedStream& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        CodeInput in;
        for (auto& c : in.amplitudes) {
            const double re = normal(rng);
            const double im = normal(rng);
            c = {re, im};
        }
        const double n = in.norm();
        if (n < 1e-150) continue;
        for (auto& c : in.amplitudes) c /= n;
        return in;
    }
}

CodeInput cz_target(const CodeInput& input) {
    CodeInput out = input;
    for (int i = 0; i < kCodeDim; ++i) out.amplitudes[i] *= kCzSigns[i];
    return out;
}

CodeChannel::CodeChannel(Blocks blocks, ModelParams params, double time)
    : blocks_(std::move(blocks)), params_(std::move(params)), time_(time) {}

CodeChannel CodeChannel::identity() {
    Blocks b;
    for (int i = 0; i < kCodeDim; ++i) {
        for (int j = 0; j < kCodeDim; ++j) b[i][j] = atomic_dyad(kCodeToAtomic[i], kCodeToAtomic[j]);
    }
    return CodeChannel(std::move(b), ModelParams{}, 0.0);
}

CodeChannel CodeChannel::perfect_cz() {
    Blocks b;
    for (int i = 0; i < kCodeDim; ++i) {
        for (int j = 0; j < kCodeDim; ++j) {
            b[i][j] = kCzSigns[i] * kCzSigns[j] * atomic_dyad(kCodeToAtomic[i], kCodeToAtomic[j]);
        }
    }
    return CodeChannel(std::move(b), ModelParams{}, 0.0);
}

AtomicDensity CodeChannel::output(const CodeInput& input) const {
    AtomicDensity rho = AtomicDensity::Zero();
    for (int i = 0; i < kCodeDim; ++i) {
        for (int j = 0; j < kCodeDim; ++j) {
            const cplx w = input.amplitudes[i] * std::conj(input.amplitudes[j]);
            if (w != cplx{}) rho += w * blocks_[i][j];
        }
    }
    return rho;
}

std::vector<CodeChannel> reconstruct_channel_series(const ModelParams& params,
                                                    std::span<const double> times,
                                                    const IntegratorConfig& cfg) {
    params.validate();
    const Basis basis = build_basis(params.n_fibre());
    const Matrix h = build_hamiltonian(params, basis);
    const auto jumps = build_jump_operators(params, basis);
    const int d = basis.dimension();

    // Only the two excited code states move; the dark code states are stationary.
    Matrix heads = Matrix::Zero(d, 2);
    heads(Basis::kHeadEG, 0) = 1.0;
    heads(basis.head_es(), 1) = 1.0;

    const FamilyTrajectory traj = propagate_family(h, jumps, heads, times, cfg);

    std::vector<int> landing_atomic;
    for (int row : traj.landing) {
        const auto& s = basis.state_at(row);
        if (s.field.mode != Mode::vacuum || s.excitation() != 0) {
            throw std::logic_error("jump operator lands outside the dark sector");
        }
        landing_atomic.push_back(atomic_index(s.atomic));
    }
    const auto l = static_cast<int>(landing_atomic.size());

    std::array<Vector, 2> dark;
    for (int k = 0; k < 2; ++k) {
        dark[k] = Vector::Zero(d);
        dark[k][k == 0 ? Basis::kDarkGG : Basis::kDarkGS] = 1.0;
    }

    std::vector<CodeChannel> out;
    out.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        CodeChannel::Blocks e;
        // dark x dark
        for (int i = 2; i < kCodeDim; ++i) {
            for (int j = 2; j < kCodeDim; ++j) e[i][j] = atomic_dyad(kCodeToAtomic[i], kCodeToAtomic[j]);
        }
        // excited x dark coherences
        for (int p = 0; p < 2; ++p) {
            const Vector ket = snap.kets.col(p);
            for (int k = 0; k < 2; ++k) {
                e[p][2 + k] = partial_trace_outer(ket, dark[k], basis);
                e[2 + k][p] = e[p][2 + k].adjoint();
            }
        }
        // excited x excited, plus what the jumps deposited in the dark sector
        for (int p = 0; p < 2; ++p) {
            for (int q = 0; q < 2; ++q) {
                AtomicDensity blk =
                    partial_trace_outer(snap.kets.col(p), snap.kets.col(q), basis);
                for (int x = 0; x < l; ++x) {
                    for (int y = 0; y < l; ++y) {
                        blk(landing_atomic[x], landing_atomic[y]) +=
                            snap.dark_feed(p * l + x, q * l + y);
                    }
                }
                e[p][q] = blk;
            }
        }
        out.emplace_back(std::move(e), params, snap.time);
    }
    return out;
}

CodeChannel reconstruct_channel(const ModelParams& params, double t, const IntegratorConfig& cfg) {
    const std::array<double, 1> times{t};
    return std::move(reconstruct_channel_series(params, times, cfg).front());
}

double state_fidelity(const CodeChannel& channel, const CodeInput& input) {
    const AtomicDensity rho = channel.output(input);
    const CodeInput target = cz_target(input);
    Eigen::Matrix<cplx, kAtomicDim, 1> psi = Eigen::Matrix<cplx, kAtomicDim, 1>::Zero();
    for (int i = 0; i < kCodeDim; ++i) psi[kCodeToAtomic[i]] = target.amplitudes[i];
    const double f = (psi.adjoint() * rho * psi)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

McEstimate mc_average_fidelity(const CodeChannel& channel, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("Monte-Carlo estimate needs at least one sample");
    SeedStream rng(seed);
    // Welford accumulation.
    double mean = 0.0;
    double m2 = 0.0;
    for (int k = 1; k <= n_samples; ++k) {
        const double f = state_fidelity(channel, haar_sample(rng));
        const double delta = f - mean;
        mean += delta / k;
        m2 += delta * (f - mean);
    }
    McEstimate est;
    est.mean = mean;
    est.samples = n_samples;
    est.stderr_of_mean =
        n_samples > 1 ? std::sqrt(std::max(0.0, m2 / (n_samples - 1)) / n_samples) : 0.0;
    return est;
}

double entanglement_fidelity(const CodeChannel& channel) {
    cplx acc{};
    for (int i = 0; i < kCodeDim; ++i) {
        for (int j = 0; j < kCodeDim; ++j) {
            acc += kCzSigns[i] * kCzSigns[j] *
                   channel.block(i, j)(kCodeToAtomic[i], kCodeToAtomic[j]);
        }
    }
    return acc.real() / (kCodeDim * kCodeDim);
}

double exact_average_fidelity(const CodeChannel& channel) {
    double retained = 0.0; // sum_i Tr_code E_ii
    for (int i = 0; i < kCodeDim; ++i) {
        for (int k = 0; k < kCodeDim; ++k) {
            retained += channel.block(i, i)(kCodeToAtomic[k], kCodeToAtomic[k]).real();
        }
    }
    const double d = kCodeDim;
    return (retained + d * d * entanglement_fidelity(channel)) / (d * (d + 1.0));
}

} // namespace fibregate
