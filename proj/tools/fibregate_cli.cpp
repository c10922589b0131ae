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

// Command-line front end: simulate, sweep, series, figure <id>, selftest.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fibregate/config.hpp"
#include "fibregate/figures.hpp"
#include "fibregate/fidelity.hpp"
#include "fibregate/sweep.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using namespace fibregate;

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<int> workers;
    std::optional<double> dt;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_config) {
    if (with_config) cmd->add_option("--config", o.config, "run configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output path (directory for `figure`)");
    cmd->add_option("--seed", o.seed, "Monte-Carlo seed");
    cmd->add_option("--samples", o.samples, "Monte-Carlo samples; selects the sampled estimator")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.workers, "worker threads (default: $FIBREGATE_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dt", o.dt, "integrator step in units of 1/g")->check(CLI::PositiveNumber);
}

void apply(const Overrides& o, GridSpec& spec) {
    if (o.samples) {
        spec.estimator.kind = EstimatorKind::monte_carlo;
        spec.estimator.samples = *o.samples;
    }
    if (o.seed) spec.estimator.seed = *o.seed;
    if (o.workers) spec.workers = *o.workers;
    if (o.dt) spec.integrator.dt = *o.dt;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open {}", path));
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
}

// Writes to a sibling temporary and renames on success, so a failed run leaves no partial CSV.
void write_csv_atomically(const fs::path& path, const SweepResult& result) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".partial";
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
            write_csv(os, result);
            os.flush();
            if (!os) throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

void print_peak(const SweepRow& p, std::string_view prefix = "") {
    fmt::print("{}peak F={:.6f} at dg={} dv={} t={}\n", prefix, p.fidelity, p.delta_g, p.delta_v, p.time);
}

// Progress on stderr while the grid runs.
SweepResult run_with_progress(const GridSpec& spec, std::string_view label) {
    const std::size_t total = spec.delta_g.values().size() * spec.delta_v.values().size();
    std::atomic<std::size_t> done{0};
    std::atomic<bool> finished{false};
    const auto start = std::chrono::steady_clock::now();
    std::jthread reporter;
    if (total > 1) {
        reporter = std::jthread([&] {
            while (!finished.load()) {
                for (int i = 0; i < 50 && !finished.load(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(100));
                if (finished.load()) break;
                const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                fmt::print(stderr, "{}: {}/{} points, {:.0f} s\n", label, done.load(), total, s);
            }
        });
    }
    try {
        auto r = run_grid(spec, &done);
        finished = true;
        return r;
    } catch (...) {
        finished = true;
        throw;
    }
}

int cmd_simulate(const Overrides& o, std::optional<double> dg, std::optional<double> dv) {
    const auto cfg = load_config(o.config);
    auto spec = cfg.grid();
    apply(o, spec);
    spec.validate();
    const double g = dg.value_or(cfg.delta_g.lo);
    const double v = dv.value_or(cfg.delta_v.lo);
    const auto rows = evaluate_point(spec, g, v);
    for (const auto& r : rows) {
        if (r.stderr_of_mean) {
            fmt::print("F={:.6f} stderr={:.6f} at dg={} dv={} t={}\n", r.fidelity, *r.stderr_of_mean, g, v, r.time);
        } else {
            fmt::print("F={:.6f} at dg={} dv={} t={}\n", r.fidelity, g, v, r.time);
        }
    }
    print_peak(find_peak(rows));
    return 0;
}

int cmd_sweep(const Overrides& o) {
    const auto cfg = load_config(o.config);
    auto spec = cfg.grid();
    apply(o, spec);
    const fs::path out = !o.out.empty() ? o.out : (!cfg.out.empty() ? cfg.out : "sweep.csv");
    const auto res = run_with_progress(spec, "sweep");
    write_csv_atomically(out, res);
    print_peak(res.peak);
    return 0;
}

int cmd_series(const Overrides& o, std::optional<double> dg, std::optional<double> dv) {
    const auto cfg = load_config(o.config);
    auto spec = cfg.grid();
    apply(o, spec);
    const fs::path out = !o.out.empty() ? o.out : (!cfg.out.empty() ? cfg.out : "series.csv");
    const auto ts = time_series(spec, dg.value_or(cfg.delta_g.lo), dv.value_or(cfg.delta_v.lo), cfg.threshold);
    write_csv_atomically(out, ts.result);
    if (ts.first_peak) print_peak(*ts.first_peak, "first ");
    print_peak(ts.result.peak);
    return 0;
}

int cmd_figure(const Overrides& o, const std::string& id) {
    const auto runs = figure_runs(id);
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    for (auto run : runs) {
        apply(o, run.spec);
        const fs::path path = dir / (run.name + ".csv");
        SweepResult res;
        std::optional<SweepRow> first;
        if (run.series) {
            auto ts = time_series(run.spec, run.series_delta_g, run.series_delta_v, 0.5);
            res = std::move(ts.result);
            first = ts.first_peak;
        } else {
            res = run_with_progress(run.spec, run.name);
        }
        write_csv_atomically(path, res);
        fmt::print("{}: wrote {}\n", run.name, path.string());
        if (first) print_peak(*first, "first ");
        print_peak(res.peak);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibregate: CZ gate fidelity for two fibre-coupled cavity nodes"};
    app.require_subcommand(1);

    Overrides o;
    std::optional<double> dg, dv;
    std::string figure_id;

    auto* simulate = app.add_subcommand("simulate", "average fidelity at one (delta_g, delta_v) point");
    add_common(simulate, o, true);
    simulate->add_option("--dg", dg, "delta_g (default: lower end of the configured range)");
    simulate->add_option("--dv", dv, "delta_v (default: lower end of the configured range)");

    auto* sweep = app.add_subcommand("sweep", "fidelity over the configured (delta_g, delta_v, t) grid");
    add_common(sweep, o, true);

    auto* series = app.add_subcommand("series", "fidelity versus time at one coupling point");
    add_common(series, o, true);
    series->add_option("--dg", dg, "delta_g (default: lower end of the configured range)");
    series->add_option("--dv", dv, "delta_v (default: lower end of the configured range)");

    auto* figure = app.add_subcommand("figure", "run a figure preset, writing <name>.csv files");
    add_common(figure, o, false);
    figure->add_option("id", figure_id, "figure id")->required()->check(CLI::IsMember(figure_ids()));

    auto* selftest = app.add_subcommand("selftest", "check the solver against independent oracles");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(o, dg, dv);
        if (sweep->parsed()) return cmd_sweep(o);
        if (series->parsed()) return cmd_series(o, dg, dv);
        if (figure->parsed()) return cmd_figure(o, figure_id);
        if (selftest->parsed()) return fibregate::tools::run_selftest(std::cout) == 0 ? 0 : 1;
    } catch (const SweepError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
