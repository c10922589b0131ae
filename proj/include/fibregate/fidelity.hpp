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

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fibregate/dynamics.hpp"
#include "fibregate/hilbert.hpp"
#include "fibregate/model.hpp"

namespace fibregate {

inline constexpr int kCodeDim = 4;

// Code basis order: |e>1|g>2, |e>1|s>2, |g>1|g>2, |g>1|s>2.
inline constexpr std::array<int, kCodeDim> kCodeToAtomic = {kEG, kES, kGG, kGS};

struct CodeInput {
    std::array<cplx, kCodeDim> amplitudes{};

    cplx alpha() const { return amplitudes[0]; }
    cplx beta() const { return amplitudes[1]; }
    cplx gamma_a() const { return amplitudes[2]; }
    cplx delta_a() const { return amplitudes[3]; }

    double norm() const;
    static CodeInput basis(int i);
};

using SeedStream = std::mt19937_64;

// Haar-random pure state on the code space: 8 standard normals, normalised.
CodeInput haar_sample(SeedStream& rng);

// Controlled-Z target: (alpha, -beta, gamma_a, delta_a).
CodeInput cz_target(const CodeInput& input);

// E_ij = Tr_f[Lambda_t(|i><j| (x) |0><0|_f)] on the six-label atomic space.
class CodeChannel {
public:
    using Blocks = std::array<std::array<AtomicDensity, kCodeDim>, kCodeDim>;

    CodeChannel(Blocks blocks, ModelParams params, double time);

    static CodeChannel identity();
    static CodeChannel perfect_cz();

    const AtomicDensity& block(int i, int j) const { return blocks_[i][j]; }
    const Blocks& blocks() const { return blocks_; }
    const ModelParams& params() const { return params_; }
    double time() const { return time_; }

    // sum_ij c_i conj(c_j) E_ij
    AtomicDensity output(const CodeInput& input) const;

private:
    Blocks blocks_;
    ModelParams params_;
    double time_;
};

CodeChannel reconstruct_channel(const ModelParams& params, double t,
                                const IntegratorConfig& cfg = {});

// One trajectory, one channel per requested time (ascending).
std::vector<CodeChannel> reconstruct_channel_series(const ModelParams& params,
                                                    std::span<const double> times,
                                                    const IntegratorConfig& cfg = {});

// <Psi_out| rho_atomic |Psi_out>, clamped to [0, 1].
double state_fidelity(const CodeChannel& channel, const CodeInput& input);

struct McEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    int samples = 0;
};

McEstimate mc_average_fidelity(const CodeChannel& channel, int n_samples, std::uint64_t seed);

// Closed-form Haar average over the code space:
//   F = (sum_i Tr_code E_ii + sum_ij <u_i|E_ij|u_j>) / (d (d + 1)),  u_i = CZ|i>.
// Reduces to (d F_e + 1)/(d + 1) when no population leaves the code space.
double exact_average_fidelity(const CodeChannel& channel);

// Entanglement fidelity of the target-inverted channel, (1/d^2) sum_ij <u_i|E_ij|u_j>.
double entanglement_fidelity(const CodeChannel& channel);

} // namespace fibregate
