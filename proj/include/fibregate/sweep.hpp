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

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibregate/dynamics.hpp"
#include "fibregate/model.hpp"

namespace fibregate {

// Inclusive arithmetic range lo, lo + step, ..., <= hi.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    static Range single(double v) { return {v, v, 1.0}; }
    std::vector<double> values() const;
    void validate(const char* name) const;
    friend bool operator==(const Range&, const Range&) = default;
};

enum class EstimatorKind { exact, monte_carlo };

struct Estimator {
    EstimatorKind kind = EstimatorKind::exact;
    int samples = 200;
    std::uint64_t seed = 42;
    friend bool operator==(const Estimator&, const Estimator&) = default;
};

struct GridSpec {
    Range delta_g{-0.5, 2.0, 0.05};
    Range delta_v{-0.5, 2.0, 0.05};
    std::vector<double> times{4.6}; // ascending
    std::vector<double> detunings;
    double g1 = 1.0; // reference couplings of node 1
    double v1 = 1.0;
    LossRates losses;
    Estimator estimator;
    IntegratorConfig integrator;
    int workers = 0; // 0: default_worker_count()

    void validate() const;
};

struct SweepRow {
    double delta_g = 0.0;
    double delta_v = 0.0;
    double time = 0.0;
    double fidelity = 0.0;
    std::optional<double> stderr_of_mean; // Monte-Carlo only
    std::optional<int> n_samples;         // Monte-Carlo only
};

struct SweepResult {
    std::vector<SweepRow> rows; // row-major: delta_g, then delta_v, then time
    SweepRow peak;              // max fidelity, first in row order on ties
};

// Row with the largest fidelity; the earliest row wins ties.
SweepRow find_peak(const std::vector<SweepRow>& rows);

class SweepError : public std::runtime_error {
public:
    SweepError(const std::string& what, SweepResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SweepResult& partial() const { return partial_; }

private:
    SweepResult partial_;
};

// Reads FIBREGATE_WORKERS, falling back to the hardware concurrency.
int default_worker_count();

// Average gate fidelity at one (delta_g, delta_v) for every time in spec.times.
std::vector<SweepRow> evaluate_point(const GridSpec& spec, double delta_g, double delta_v);

SweepResult run_grid(const GridSpec& spec, std::atomic<std::size_t>* progress = nullptr);

struct TimeSeries {
    SweepResult result;
    std::optional<SweepRow> first_peak; // first interior local maximum >= threshold
};

TimeSeries time_series(const GridSpec& spec, double delta_g, double delta_v, double threshold = 0.0);

struct StabilityProbe {
    std::string label;
    double delta_g = 0.0;
    double delta_v = 0.0;
    double time = 0.0;
    double fidelity = 0.0;
    double drop = 0.0;
};

struct StabilityReport {
    SweepRow peak;
    double perturbation = 0.0;
    std::vector<StabilityProbe> probes;
    double coupling_drop = 0.0; // worst over delta_g +- p, delta_v +- p
    double time_drop = 0.0;     // worst over g t +- p
    double worst_drop = 0.0;
};

// Shifts delta_g, delta_v and g t one at a time by +-perturbation (absolute, units
// of g and 1/g) around `peak` and records the fidelity loss of each probe.
StabilityReport stability_report(const GridSpec& spec, const SweepRow& peak, double perturbation);

// CSV: delta_g,delta_v,time,fidelity,stderr,n_samples
void write_csv(std::ostream& os, const SweepResult& result);
std::string format_csv_row(const SweepRow& row);
inline constexpr const char* kCsvHeader = "delta_g,delta_v,time,fidelity,stderr,n_samples";

// Parses text produced by write_csv; throws ConfigError on schema violations.
std::vector<SweepRow> read_csv(std::istream& is);

} // namespace fibregate
