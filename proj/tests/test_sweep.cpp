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

#include <limits>
#include <sstream>

#include "fibregate/fidelity.hpp"
#include "fibregate/sweep.hpp"

using namespace fibregate;

namespace {

GridSpec small_grid() {
    GridSpec s;
    s.delta_g = {0.7, 1.1, 0.2};
    s.delta_v = {-0.1, 0.1, 0.1};
    s.times = {4.6};
    s.detunings = spectrum_preset("fig3", {0.1});
    s.workers = 1;
    return s;
}

} // namespace

TEST_CASE("range values are inclusive and tidy") {
    CHECK(Range{-0.5, 2.0, 0.05}.values().size() == 51);
    const auto v = Range{0.0, 0.3, 0.1}.values();
    REQUIRE(v.size() == 4);
    CHECK(v[3] == 0.3);
    CHECK(Range::single(4.6).values() == std::vector<double>{4.6});
    CHECK_THROWS_AS(Range({1.0, 0.0, 0.1}).validate("x"), ConfigError);
    CHECK_THROWS_AS(Range({0.0, 1.0, 0.0}).validate("x"), ConfigError);
    CHECK_THROWS_AS(Range({0.0, std::numeric_limits<double>::infinity(), 1.0}).validate("x"), ConfigError);
}

TEST_CASE("single point matches a direct channel evaluation") {
    auto s = small_grid();
    s.delta_g = Range::single(0.9);
    s.delta_v = Range::single(0.0);
    const auto res = run_grid(s);
    REQUIRE(res.rows.size() == 1);
    auto p = ModelParams::from_offsets(0.9, 0.0, s.detunings);
    CHECK(res.rows[0].fidelity == doctest::Approx(exact_average_fidelity(reconstruct_channel(p, 4.6))).epsilon(1e-14));
    CHECK_FALSE(res.rows[0].stderr_of_mean);
    CHECK(res.peak.fidelity == res.rows[0].fidelity);
}

TEST_CASE("row order and worker-count determinism") {
    auto s = small_grid();
    s.times = {4.5, 4.6};
    const auto one = run_grid(s);
    REQUIRE(one.rows.size() == 3 * 3 * 2);
    CHECK(one.rows[0].delta_g == 0.7);
    CHECK(one.rows[0].delta_v == -0.1);
    CHECK(one.rows[0].time == 4.5);
    CHECK(one.rows[1].time == 4.6);
    CHECK(one.rows[2].delta_v == 0.0);
    CHECK(one.rows[6].delta_g == 0.9);

    for (int w : {2, 3, 8}) {
        s.workers = w;
        const auto many = run_grid(s);
        REQUIRE(many.rows.size() == one.rows.size());
        for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(many.rows[i].fidelity == one.rows[i].fidelity);
    }
}

TEST_CASE("Monte-Carlo rows carry stderr and are reproducible") {
    auto s = small_grid();
    s.estimator = {EstimatorKind::monte_carlo, 50, 9};
    s.workers = 2;
    const auto a = run_grid(s);
    const auto b = run_grid(s);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].fidelity == b.rows[i].fidelity);
        REQUIRE(a.rows[i].stderr_of_mean);
        CHECK(*a.rows[i].n_samples == 50);
    }
}

TEST_CASE("refining the grid never lowers the peak") {
    auto coarse = small_grid();
    auto fine = coarse;
    fine.delta_g.step = 0.1;
    fine.delta_v.step = 0.05;
    CHECK(run_grid(fine).peak.fidelity >= run_grid(coarse).peak.fidelity);
}

TEST_CASE("uniform losses lower the peak monotonically") {
    double prev = 2.0;
    for (double r : {0.0, 1e-3, 1e-2, 5e-2}) {
        auto s = small_grid();
        s.losses = LossRates::uniform(r);
        const double f = run_grid(s).peak.fidelity;
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("time series") {
    auto s = small_grid();
    s.times = Range{0.0, 6.0, 0.1}.values();
    const auto ts = time_series(s, 0.9, 0.0, 0.9);
    REQUIRE(ts.result.rows.size() == 61);
    CHECK(ts.result.rows[0].fidelity == doctest::Approx(0.4).epsilon(1e-12));
    REQUIRE(ts.first_peak);
    CHECK(ts.first_peak->fidelity >= 0.9);
    CHECK(ts.first_peak->time > 4.0);
    CHECK(ts.first_peak->time < 5.0);
    CHECK(time_series(s, 0.9, 0.0, 1.1).first_peak == std::nullopt);
}

TEST_CASE("find_peak picks the first maximum") {
    std::vector<SweepRow> rows{{0, 0, 1, 0.5}, {0, 0, 2, 0.9}, {0, 0, 3, 0.9}, {0, 0, 4, 0.1}};
    CHECK(find_peak(rows).time == 2);
    CHECK_THROWS(find_peak({}));
}

TEST_CASE("CSV format and round trip") {
    SweepRow exact{0.9, -0.05, 4.6, 0.98412345678};
    CHECK(format_csv_row(exact) == "0.9,-0.05,4.6,0.984123,,");
    SweepRow mc{1, 0, 4.3, 0.5, 0.0123456, 200};
    CHECK(format_csv_row(mc) == "1,0,4.3,0.500000,0.012346,200");

    SweepResult res{{exact, mc}, exact};
    std::stringstream ss;
    write_csv(ss, res);
    CHECK(ss.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const auto back = read_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].delta_v == -0.05);
    CHECK(back[0].fidelity == 0.984123);
    CHECK_FALSE(back[0].n_samples);
    CHECK(*back[1].n_samples == 200);
    CHECK(*back[1].stderr_of_mean == 0.012346);

    std::stringstream bad_header("a,b\n");
    CHECK_THROWS_AS(read_csv(bad_header), ConfigError);
    std::stringstream bad_row(std::string(kCsvHeader) + "\n1,2,x,0.5,,\n");
    CHECK_THROWS_WITH_AS(read_csv(bad_row), doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("stability report") {
    auto s = small_grid();
    const auto res = run_grid(s);
    const auto zero = stability_report(s, res.peak, 0.0);
    CHECK(zero.probes.size() == 6);
    CHECK(zero.worst_drop == 0.0);
    CHECK(zero.peak.fidelity == doctest::Approx(res.peak.fidelity).epsilon(1e-14));

    const auto rep = stability_report(s, res.peak, 0.1);
    CHECK(rep.worst_drop == std::max(rep.coupling_drop, rep.time_drop));
    CHECK(rep.worst_drop > 0.0);
    CHECK_THROWS_AS(stability_report(s, res.peak, -0.1), ConfigError);
}

TEST_CASE("invalid specs and failing points") {
    auto s = small_grid();
    s.times = {4.6, 4.5};
    CHECK_THROWS_AS(run_grid(s), ConfigError);
    s = small_grid();
    s.times.clear();
    CHECK_THROWS_AS(run_grid(s), ConfigError);
    s = small_grid();
    s.losses.kappa = -1.0;
    CHECK_THROWS_AS(run_grid(s), ConfigError);

    // Detunings this large overflow the integrator on every point.
    s = small_grid();
    s.detunings = {1e300, -1e300};
    s.workers = 2;
    try {
        run_grid(s);
        FAIL("expected SweepError");
    } catch (const SweepError& e) {
        CHECK(std::string(e.what()).find("delta_g=") != std::string::npos);
        CHECK(e.partial().rows.size() < 9);
    }
}

TEST_CASE("worker count from the environment") {
    ::setenv("FIBREGATE_WORKERS", "3", 1);
    CHECK(default_worker_count() == 3);
    ::setenv("FIBREGATE_WORKERS", "zero", 1);
    CHECK(default_worker_count() >= 1);
    ::unsetenv("FIBREGATE_WORKERS");
}
