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

// Reference computations that share no propagation code with the library paths
// they check: dense matrix exponentials of H and of the vectorised Liouvillian,
// direct density-matrix integration of individual inputs, and averages over an
// exact complex-projective 2-design.

#include <vector>

#include "fibregate/fidelity.hpp"
#include "fibregate/model.hpp"

namespace fibregate::oracle {

// exp(-i H t) psi0.
Vector expm_state(const Matrix& h, const Vector& psi0, double t);

// exp(-i H_eff t) psi0 with H_eff = H - i sum rate O^+ O.
Vector expm_nonhermitian_state(const Matrix& h, const std::vector<JumpOperator>& jumps,
                               const Vector& psi0, double t);

// Column-stacking vec convention: vec(A rho B) = (B^T kron A) vec(rho).
Matrix liouvillian(const Matrix& h, const std::vector<JumpOperator>& jumps);
Matrix expm_density(const Matrix& h, const std::vector<JumpOperator>& jumps, const Matrix& rho0,
                    double t);

// Channel blocks from 16 independent propagate_density runs (polarisation
// identity on Hermitian inputs).
CodeChannel direct_channel(const ModelParams& params, double t, const IntegratorConfig& cfg = {});

// Same, but every block from the Liouvillian exponential (small D only).
CodeChannel expm_channel(const ModelParams& params, double t);

// <Psi_out| Tr_f rho(t) |Psi_out> from a from-scratch density integration of one input.
double direct_state_fidelity(const ModelParams& params, const CodeInput& input, double t,
                             const IntegratorConfig& cfg = {});

// 20 states: the five mutually unbiased bases of C^4 (an exact 2-design).
std::vector<CodeInput> mub_states();

// Mean of state_fidelity over mub_states(); equals the Haar average exactly.
double design_average_fidelity(const CodeChannel& channel);

} // namespace fibregate::oracle
