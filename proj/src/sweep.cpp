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

#include "fibregate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "fibregate/fidelity.hpp"

namespace fibregate {

namespace {

// Grid coordinates are quoted in CSVs; keep lo + k*step free of 1e-16 debris.
double tidy(double v) {
    const double r = std::round(v * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}

} // namespace

std::vector<double> Range::values() const {
    validate("range");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (long k = 0; k < n; ++k) out.push_back(tidy(lo + k * step));
    return out;
}

void Range::validate(const char* name) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
        throw ConfigError(fmt::format("{}: range bounds must be finite", name));
    }
    if (!(step > 0.0)) throw ConfigError(fmt::format("{}: step must be positive", name));
    if (hi < lo) throw ConfigError(fmt::format("{}: empty range [{}, {}]", name, lo, hi));
}

void GridSpec::validate() const {
    delta_g.validate("delta_g");
    delta_v.validate("delta_v");
    if (times.empty()) throw ConfigError("at least one evaluation time is required");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw ConfigError("times must be >= 0");
        if (i > 0 && times[i] <= times[i - 1]) throw ConfigError("times must be strictly ascending");
    }
    if (estimator.kind == EstimatorKind::monte_carlo && estimator.samples < 1) {
        throw ConfigError("Monte-Carlo estimator needs samples >= 1");
    }
    integrator.validate();
    ModelParams::from_offsets(0.0, 0.0, detunings, losses).validate();
}

SweepRow find_peak(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("find_peak: no rows");
    const SweepRow* best = &rows.front();
    for (const auto& r : rows) {
        if (r.fidelity > best->fidelity) best = &r;
    }
    return *best;
}

int default_worker_count() {
    if (const char* env = std::getenv("FIBREGATE_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepRow> evaluate_point(const GridSpec& spec, double delta_g, double delta_v) {
    auto params = ModelParams::from_offsets(delta_g, delta_v, spec.detunings, spec.losses);
    params.g1 = spec.g1;
    params.v1 = spec.v1;
    const auto channels = reconstruct_channel_series(params, spec.times, spec.integrator);

    std::vector<SweepRow> rows;
    rows.reserve(channels.size());
    for (const auto& ch : channels) {
        SweepRow row{delta_g, delta_v, ch.time(), 0.0, std::nullopt, std::nullopt};
        if (spec.estimator.kind == EstimatorKind::exact) {
            row.fidelity = exact_average_fidelity(ch);
        } else {
            const auto est = mc_average_fidelity(ch, spec.estimator.samples, spec.estimator.seed);
            row.fidelity = est.mean;
            row.stderr_of_mean = est.stderr_of_mean;
            row.n_samples = est.samples;
        }
        rows.push_back(row);
    }
    return rows;
}

SweepResult run_grid(const GridSpec& spec, std::atomic<std::size_t>* progress) {
    spec.validate();
    const auto gs = spec.delta_g.values();
    const auto vs = spec.delta_v.values();
    const std::size_t points = gs.size() * vs.size();

    std::vector<std::vector<SweepRow>> slots(points);
    std::vector<std::string> failures(points);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};

    const auto work = [&] {
        for (;;) {
            if (abort.load()) return;
            const std::size_t k = next.fetch_add(1);
            if (k >= points) return;
            const double g = gs[k / vs.size()];
            const double v = vs[k % vs.size()];
            try {
                slots[k] = evaluate_point(spec, g, v);
            } catch (const std::exception& e) {
                failures[k] = fmt::format("point delta_g={} delta_v={}: {}", g, v, e.what());
                abort.store(true);
            }
            if (progress) progress->fetch_add(1);
        }
    };

    const int workers = std::clamp<int>(spec.workers > 0 ? spec.workers : default_worker_count(), 1,
                                        static_cast<int>(std::max<std::size_t>(1, points)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    SweepResult result;
    result.rows.reserve(points * spec.times.size());
    std::string first_failure;
    for (std::size_t k = 0; k < points; ++k) {
        if (!failures[k].empty() && first_failure.empty()) first_failure = failures[k];
        for (auto& r : slots[k]) result.rows.push_back(r);
    }
    if (!first_failure.empty()) {
        if (!result.rows.empty()) result.peak = find_peak(result.rows);
        throw SweepError(fmt::format("sweep aborted after {} of {} points: {}",
                                     result.rows.size() / spec.times.size(), points, first_failure),
                         std::move(result));
    }
    result.peak = find_peak(result.rows);
    return result;
}

TimeSeries time_series(const GridSpec& spec, double delta_g, double delta_v, double threshold) {
    GridSpec point = spec;
    point.delta_g = Range::single(delta_g);
    point.delta_v = Range::single(delta_v);
    point.validate();

    TimeSeries ts;
    ts.result.rows = evaluate_point(point, delta_g, delta_v);
    ts.result.peak = find_peak(ts.result.rows);
    const auto& rows = ts.result.rows;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double f = rows[i].fidelity;
        if (f >= threshold && f > rows[i - 1].fidelity && f >= rows[i + 1].fidelity) {
            ts.first_peak = rows[i];
            break;
        }
    }
    return ts;
}

StabilityReport stability_report(const GridSpec& spec, const SweepRow& peak, double perturbation) {
    if (!(perturbation >= 0.0)) throw ConfigError("perturbation must be >= 0");
    GridSpec point = spec;

    const auto fidelity_at = [&](double g, double v, double t) {
        point.times = {t};
        return evaluate_point(point, g, v).front().fidelity;
    };

    StabilityReport rep;
    rep.peak = peak;
    rep.perturbation = perturbation;
    const double base = fidelity_at(peak.delta_g, peak.delta_v, peak.time);
    rep.peak.fidelity = base;

    const auto probe = [&](std::string label, double g, double v, double t, double& worst) {
        const double f = fidelity_at(g, v, std::max(0.0, t));
        const double drop = std::max(0.0, base - f);
        rep.probes.push_back({std::move(label), g, v, t, f, drop});
        worst = std::max(worst, drop);
    };
    const double p = perturbation;
    probe("delta_g-", peak.delta_g - p, peak.delta_v, peak.time, rep.coupling_drop);
    probe("delta_g+", peak.delta_g + p, peak.delta_v, peak.time, rep.coupling_drop);
    probe("delta_v-", peak.delta_g, peak.delta_v - p, peak.time, rep.coupling_drop);
    probe("delta_v+", peak.delta_g, peak.delta_v + p, peak.time, rep.coupling_drop);
    probe("time-", peak.delta_g, peak.delta_v, peak.time - p, rep.time_drop);
    probe("time+", peak.delta_g, peak.delta_v, peak.time + p, rep.time_drop);
    rep.worst_drop = std::max(rep.coupling_drop, rep.time_drop);
    return rep;
}

} // namespace fibregate
