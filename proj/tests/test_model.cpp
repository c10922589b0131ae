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

#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "fibregate/model.hpp"

using namespace fibregate;

namespace {

ModelParams random_params(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    ModelParams p;
    p.g1 = {u(rng), u(rng)};
    p.g2 = {u(rng), u(rng)};
    p.v1 = {u(rng), u(rng)};
    p.v2 = {u(rng), u(rng)};
    for (int j = 0; j < n; ++j) p.detunings.push_back(u(rng));
    p.losses = {std::abs(u(rng)), std::abs(u(rng)), std::abs(u(rng))};
    return p;
}

bool same_values(std::vector<double> a, std::vector<double> b, double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

} // namespace

TEST_CASE("two-mode Hamiltonian entries") {
    const Basis b = build_basis(2);
    auto p = ModelParams::from_offsets(0.0, 0.0, spectrum_preset("fig3", {0.1}));
    const Matrix h = build_hamiltonian(p, b);
    const AtomicLabel gg{Atom1::g, Atom2::g}, gs{Atom1::g, Atom2::s};

    for (const auto& ground : {gg, gs}) {
        const int b0 = b.index_of({ground, FieldLabel::fibre_mode(0)});
        const int b1 = b.index_of({ground, FieldLabel::fibre_mode(1)});
        CHECK(h(b0, b0).real() == doctest::Approx(-0.1));
        CHECK(h(b1, b1).real() == doctest::Approx(0.1));
    }
    const int es = b.index_of({{Atom1::e, Atom2::s}, FieldLabel::vacuum()});
    const int gs_a1 = b.index_of({gs, FieldLabel::cavity(1)});
    CHECK(h(es, gs_a1) == cplx(1.0, 0.0));
    CHECK(h(gs_a1, es) == cplx(1.0, 0.0));
}

TEST_CASE("coupling matrix elements follow the operator definitions") {
    const Basis b = build_basis(3);
    ModelParams p;
    p.g1 = {0.7, 0.2};
    p.g2 = {1.3, -0.4};
    p.v1 = {0.9, 0.1};
    p.v2 = {-0.5, 0.6};
    p.detunings = {-0.2, 0.0, 0.3};
    const Matrix h = build_hamiltonian(p, b);
    const AtomicLabel gg{Atom1::g, Atom2::g};
    const int e1 = Basis::kHeadEG;
    const int a1 = b.index_of({gg, FieldLabel::cavity(1)});
    const int a2 = b.index_of({gg, FieldLabel::cavity(2)});
    const int e2 = b.index_of({{Atom1::g, Atom2::e}, FieldLabel::vacuum()});
    CHECK(h(e1, a1) == p.g1);
    CHECK(h(e2, a2) == p.g2);
    for (int j = 0; j < 3; ++j) {
        const int bj = b.index_of({gg, FieldLabel::fibre_mode(j)});
        CHECK(h(a1, bj) == p.v1);
        CHECK(h(a2, bj) == p.v2);
        CHECK(h(bj, a2) == std::conj(p.v2));
    }
    // Fibre modes do not talk to each other or to the atoms directly.
    const int b0 = b.index_of({gg, FieldLabel::fibre_mode(0)});
    const int b1 = b.index_of({gg, FieldLabel::fibre_mode(1)});
    CHECK(h(b0, b1) == cplx{});
    CHECK(h(e1, b0) == cplx{});
    CHECK(h(e1, e2) == cplx{});
}

TEST_CASE("empty interaction gives H = 0") {
    const Basis b = build_basis(4);
    ModelParams p;
    p.g1 = p.g2 = p.v1 = p.v2 = 0.0;
    p.detunings.assign(4, 0.0);
    CHECK(build_hamiltonian(p, b).norm() == 0.0);
}

TEST_CASE("Hamiltonian: Hermitian, branch block-diagonal, dark sector annihilated") {
    std::mt19937_64 rng(3);
    for (int n : {1, 2, 7, 31}) {
        const Basis b = build_basis(n);
        const Matrix h = build_hamiltonian(random_params(n, rng), b);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
        const auto g = b.g_branch(), s = b.s_branch();
        CHECK(h.block(g.begin, s.begin, g.size(), s.size()).norm() == 0.0);
        CHECK(h.block(s.begin, g.begin, s.size(), g.size()).norm() == 0.0);
        CHECK(h.topRows(2).norm() == 0.0);
        CHECK(h.leftCols(2).norm() == 0.0);
    }
}

TEST_CASE("a phase on v2 is a diagonal gauge transformation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(-3.1, 3.1);
    const Basis b = build_basis(4);
    auto p = ModelParams::from_offsets(0.0, 0.0, {-0.3, -0.1, 0.2, 0.35});
    const Matrix h_real = build_hamiltonian(p, b);

    for (int trial = 0; trial < 5; ++trial) {
        const double phi = phase(rng);
        p.v2 = std::polar(1.0, phi);
        const Matrix h = build_hamiltonian(p, b);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);

        Eigen::SelfAdjointEigenSolver<Matrix> e0(h_real), e1(h);
        std::vector<double> l0(e0.eigenvalues().data(), e0.eigenvalues().data() + b.dimension());
        std::vector<double> l1(e1.eigenvalues().data(), e1.eigenvalues().data() + b.dimension());
        CHECK(same_values(l0, l1, 1e-12));

        // U = diag phase on cavity-2 and atom-2 states maps one onto the other.
        Vector u = Vector::Ones(b.dimension());
        for (int i = 0; i < b.dimension(); ++i) {
            const auto& st = b.state_at(i);
            if (st.field.mode == Mode::cavity2 || st.atomic.atom2 == Atom2::e) u[i] = std::polar(1.0, phi);
        }
        const Matrix mapped = u.asDiagonal() * h_real * u.conjugate().asDiagonal();
        CHECK((mapped - h).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("shifting every detuning adds c times the fibre number operator") {
    std::mt19937_64 rng(9);
    const Basis b = build_basis(6);
    auto p = random_params(6, rng);
    const Matrix h0 = build_hamiltonian(p, b);
    for (double& d : p.detunings) d += 0.37;
    const Matrix h1 = build_hamiltonian(p, b);
    CHECK((h1 - h0 - 0.37 * fibre_number_operator(b)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("detuning count must match the basis") {
    const Basis b = build_basis(3);
    auto p = ModelParams::from_offsets(0.0, 0.0, {0.1, 0.2});
    CHECK_THROWS_AS(build_hamiltonian(p, b), DimensionError);
    CHECK_THROWS_AS(build_jump_operators(p, b), DimensionError);
}

TEST_CASE("jump operators") {
    const int n = 3;
    const Basis b = build_basis(n);
    auto p = ModelParams::from_offsets(0.2, 0.1, {-0.1, 0.0, 0.1}, {0.01, 0.02, 0.03});
    const auto jumps = build_jump_operators(p, b);
    REQUIRE(jumps.size() == 4 + n);
    CHECK(jumps[0].rate == 0.01);
    CHECK(jumps[1].rate == 0.01);
    CHECK(jumps[2].rate == 0.02);
    CHECK(jumps[3].rate == 0.02);
    for (int j = 0; j < n; ++j) CHECK(jumps[4 + j].rate == 0.03);

    SUBCASE("atom-1 lowering") {
        const Matrix& s1 = jumps[2].matrix;
        const int es = b.head_es();
        CHECK(s1(Basis::kDarkGG, Basis::kHeadEG) == cplx(1.0));
        CHECK(s1(Basis::kDarkGS, es) == cplx(1.0));
        Matrix rest = s1;
        rest(Basis::kDarkGG, Basis::kHeadEG) = 0.0;
        rest(Basis::kDarkGS, es) = 0.0;
        CHECK(rest.norm() == 0.0);
    }
    SUBCASE("atom-2 lowering annihilates |s>") {
        const Matrix& s2 = jumps[3].matrix;
        const int ge = b.index_of({{Atom1::g, Atom2::e}, FieldLabel::vacuum()});
        CHECK(s2(Basis::kDarkGG, ge) == cplx(1.0));
        CHECK(s2.norm() == doctest::Approx(1.0));
        CHECK(s2.col(b.head_es()).norm() == 0.0);
    }
    SUBCASE("single-excitation structure") {
        for (const auto& j : jumps) {
            CHECK((j.matrix * j.matrix).norm() == 0.0);
            // annihilates the dark sector, lands only in it
            CHECK(j.matrix.leftCols(2).norm() == 0.0);
            CHECK(j.matrix.bottomRows(b.dimension() - 2).norm() == 0.0);
        }
    }
    SUBCASE("lossless rates") {
        auto q = ModelParams::from_offsets(0.0, 0.0, {-0.1, 0.0, 0.1});
        for (const auto& j : build_jump_operators(q, b)) CHECK(j.rate == 0.0);
    }
}

TEST_CASE("dissipator preserves trace") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    const Basis b = build_basis(3);
    const auto p = random_params(3, rng);
    const Matrix h = build_hamiltonian(p, b);
    const auto jumps = build_jump_operators(p, b);
    const int d = b.dimension();
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) a(i, k) = {nd(rng), nd(rng)};
    const Matrix rho = a * a.adjoint() / (a * a.adjoint()).trace();

    const cplx i{0.0, 1.0};
    Matrix rhs = -i * (h * rho - rho * h);
    for (const auto& j : jumps) {
        const Matrix& o = j.matrix;
        rhs += j.rate * (2.0 * o * rho * o.adjoint() - o.adjoint() * o * rho - rho * o.adjoint() * o);
    }
    CHECK(std::abs(rhs.trace()) < 1e-12);
}

TEST_CASE("parameter validation") {
    auto p = ModelParams::from_offsets(0.9, 0.0, {0.1});
    CHECK_NOTHROW(p.validate());
    CHECK(p.delta_g() == doctest::Approx(0.9));
    CHECK(p.delta_v() == doctest::Approx(0.0));
    p.losses.kappa = -1e-3;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.losses.kappa = 0.0;
    p.detunings.clear();
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("spectrum presets") {
    SUBCASE("fig3") {
        CHECK(spectrum_preset("fig3", {0.45}) == std::vector<double>{-0.45, 0.45});
    }
    SUBCASE("fig5a/fig5b") {
        const auto a = spectrum_preset("fig5a");
        CHECK(a.size() == 31);
        CHECK(std::count(a.begin(), a.end(), 0.0) == 1);
        CHECK(a.front() == doctest::Approx(-0.45));
        CHECK(a.back() == doctest::Approx(0.45));
        for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k] - a[k - 1] == doctest::Approx(0.03));
        const auto b = spectrum_preset("fig5b");
        CHECK(b.size() == 30);
        CHECK(std::count(b.begin(), b.end(), 0.0) == 0);
    }
    SUBCASE("fig6a/fig6b") {
        const auto b = spectrum_preset("fig6b");
        CHECK(b.size() == 32);
        CHECK(b.front() == doctest::Approx(-0.9));
        CHECK(b.back() == doctest::Approx(0.9));
        CHECK(std::count_if(b.begin(), b.end(), [](double x) { return std::abs(x) < 0.45 - 1e-12; }) == 0);
        const auto a = spectrum_preset("fig6a");
        CHECK(a.size() == 33);
        CHECK(std::count(a.begin(), a.end(), 0.0) == 1);
    }
    SUBCASE("fig8 variants") {
        const auto one_sided = spectrum_preset("fig8");
        CHECK(one_sided.size() == 16);
        CHECK(one_sided.front() == doctest::Approx(0.45));
        CHECK(one_sided.back() == doctest::Approx(0.9));
        const auto split = spectrum_preset("fig8_split");
        CHECK(split.size() == 16);
        CHECK(split.front() == -0.9);
        CHECK(split[7] == -0.45);
        CHECK(split[8] == 0.45);
        CHECK(split.back() == 0.9);
        CHECK(split[9] - split[8] == doctest::Approx(0.45 / 7));
    }
    SUBCASE("fig9") {
        CHECK(spectrum_preset("fig9a", {0.0, 0.0, 2}) == std::vector<double>{-0.1, 0.1});
        const auto s = spectrum_preset("fig9a", {0.0, 0.2, 2});
        CHECK(s[0] == doctest::Approx(0.1));
        CHECK(s[1] == doctest::Approx(0.3));
        const auto b = spectrum_preset("fig9b", {0.0, 0.0, 30});
        CHECK(b.size() == 30);
        CHECK(b.front() == doctest::Approx(-13.05));
        CHECK(b[1] - b[0] == doctest::Approx(0.9));
    }
    SUBCASE("fig10") {
        const auto a = spectrum_preset("fig10a");
        CHECK(a.size() == 100);
        CHECK(a.front() == -0.45);
        CHECK(a.back() == 0.45);
        CHECK(std::count(a.begin(), a.end(), 0.0) == 0);
        const auto b = spectrum_preset("fig10b");
        CHECK(b.size() == 100);
        CHECK(std::count(b.begin(), b.end(), 0.0) == 0);
        CHECK(b.front() == doctest::Approx(-1.5));
        CHECK(b.back() == doctest::Approx(1.5));
        for (double x : spectrum_preset("fig5b")) CHECK(std::find(b.begin(), b.end(), x) != b.end());
    }
    SUBCASE("all presets sorted") {
        for (const auto& id : preset_ids()) {
            const auto v = spectrum_preset(id, {0.2, 0.1, 5});
            CHECK(std::is_sorted(v.begin(), v.end()));
        }
    }
    SUBCASE("unknown id") { CHECK_THROWS_AS(spectrum_preset("fig11"), ConfigError); }
    SUBCASE("tagged constructors") {
        CHECK(detunings(Band{0.0, 1.0, 3}) == std::vector<double>{0.0, 0.5, 1.0});
        CHECK(detunings(BandPair{0.5, 1.0, 2}) == std::vector<double>{-1.0, -0.5, 0.5, 1.0});
        CHECK(detunings(Explicit{{0.3, -0.2}}) == std::vector<double>{-0.2, 0.3});
        CHECK_THROWS_AS(detunings(Band{1.0, 0.0, 3}), ConfigError);
    }
}

TEST_CASE("fibre length for a mode spacing") {
    CHECK(fibre_length_for_spacing(0.9, 1e9) == doctest::Approx(1.0472).epsilon(1e-3));
    CHECK(fibre_length_for_spacing(0.03, 1e9) == doctest::Approx(31.416).epsilon(1e-3));
    CHECK(fibre_length_for_spacing(0.2, 1e9) == doctest::Approx(0.5 * fibre_length_for_spacing(0.1, 1e9)));
    CHECK_THROWS_AS(fibre_length_for_spacing(0.0, 1e9), ConfigError);
    CHECK_THROWS_AS(fibre_length_for_spacing(0.1, -1.0), ConfigError);
}
