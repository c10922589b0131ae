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

#include "selftest.hpp"

#include <functional>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "fibregate/dynamics.hpp"
#include "fibregate/fidelity.hpp"
#include "oracles.hpp"

namespace fibregate::tools {

namespace {

struct Check {
    std::string name;
    double tolerance;
    std::function<double()> error; // measured discrepancy
};

double block_error(const CodeChannel& a, const CodeChannel& b) {
    double m = 0.0;
    for (int i = 0; i < kCodeDim; ++i)
        for (int j = 0; j < kCodeDim; ++j) m = std::max(m, (a.block(i, j) - b.block(i, j)).cwiseAbs().maxCoeff());
    return m;
}

ModelParams lossy(double dg, double dv, double rate) {
    return ModelParams::from_offsets(dg, dv, spectrum_preset("fig3", {0.1}), LossRates::uniform(rate));
}

} // namespace

int run_selftest(std::ostream& os) {
    const std::vector<Check> checks = {
        {"state propagation vs matrix exponential", 1e-8,
         [] {
             const auto p = ModelParams::from_offsets(0.9, 0.0, {-0.2, 0.05, 0.3});
             const auto b = build_basis(p.n_fibre());
             const Matrix h = build_hamiltonian(p, b);
             const auto j = build_jump_operators(p, b);
             Vector psi0 = Vector::Zero(b.dimension());
             psi0[b.head_es()] = 1.0;
             return (propagate_state(h, j, psi0, 4.6) - oracle::expm_state(h, psi0, 4.6)).cwiseAbs().maxCoeff();
         }},
        {"density propagation vs Liouvillian exponential", 1e-7,
         [] {
             const auto p = lossy(0.9, 0.0, 0.01);
             const auto b = build_basis(p.n_fibre());
             const Matrix h = build_hamiltonian(p, b);
             const auto j = build_jump_operators(p, b);
             Matrix rho0 = Matrix::Zero(b.dimension(), b.dimension());
             rho0(Basis::kHeadEG, Basis::kHeadEG) = 1.0;
             return (propagate_density(h, j, rho0, 4.6) - oracle::expm_density(h, j, rho0, 4.6))
                 .cwiseAbs()
                 .maxCoeff();
         }},
        {"channel vs direct density-matrix channel", 1e-8,
         [] {
             const auto p = lossy(0.8, 0.1, 0.02);
             return block_error(reconstruct_channel(p, 4.6), oracle::direct_channel(p, 4.6));
         }},
        {"exact average vs 2-design average", 1e-12,
         [] {
             const auto ch = reconstruct_channel(lossy(0.9, 0.0, 0.01), 4.6);
             return std::abs(exact_average_fidelity(ch) - oracle::design_average_fidelity(ch));
         }},
        {"identity channel averages to 0.4", 1e-12,
         [] { return std::abs(exact_average_fidelity(CodeChannel::identity()) - 0.4); }},
        {"perfect CZ averages to 1", 1e-12,
         [] { return std::abs(exact_average_fidelity(CodeChannel::perfect_cz()) - 1.0); }},
        {"Monte-Carlo within 3 stderr of exact (in stderr units)", 3.0,
         [] {
             const auto ch = reconstruct_channel(lossy(0.9, 0.0, 0.0), 4.6);
             const auto mc = mc_average_fidelity(ch, 2000, 42);
             return std::abs(mc.mean - exact_average_fidelity(ch)) / mc.stderr_of_mean;
         }},
    };

    int failures = 0;
    for (const auto& c : checks) {
        double err = 0.0;
        bool ok = false;
        try {
            err = c.error();
            ok = err <= c.tolerance;
        } catch (const std::exception& e) {
            os << fmt::format("FAIL  {}: {}\n", c.name, e.what());
            ++failures;
            continue;
        }
        os << fmt::format("{}  {} (error {:.3g}, tolerance {:.3g})\n", ok ? "ok  " : "FAIL", c.name, err,
                          c.tolerance);
        if (!ok) ++failures;
    }
    os << fmt::format("selftest: {} of {} checks passed\n", checks.size() - failures, checks.size());
    return failures;
}

} // namespace fibregate::tools
