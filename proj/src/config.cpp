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

#include "fibregate/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fibregate {

ConfigParseError::ConfigParseError(int line, const std::string& what)
    : ConfigError(fmt::format("line {}: {}", line, what)), line_(line) {}

std::vector<double> RunConfig::detunings() const {
    if (spectrum == "explicit") {
        auto d = fibregate::detunings(Explicit{explicit_detunings});
        if (d.empty()) throw ConfigError("explicit spectrum needs at least one detuning");
        return d;
    }
    return spectrum_preset(spectrum, preset_args);
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.delta_g = delta_g;
    g.delta_v = delta_v;
    g.times = time.values();
    g.detunings = detunings();
    g.g1 = g1;
    g.v1 = v1;
    g.losses = losses;
    g.estimator = estimator;
    g.integrator = integrator;
    g.workers = workers;
    return g;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s, int line, std::string_view key) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigParseError(line, fmt::format("'{}' expects a number, got '{}'", key, s));
    }
    return v;
}

std::uint64_t to_u64(std::string_view s, int line, std::string_view key) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigParseError(line, fmt::format("'{}' expects a nonnegative integer, got '{}'", key, s));
    }
    return v;
}

int to_int(std::string_view s, int line, std::string_view key) {
    const auto v = to_u64(s, line, key);
    if (v > 1'000'000'000ULL) throw ConfigParseError(line, fmt::format("'{}' is too large", key));
    return static_cast<int>(v);
}

Range to_range(std::string_view s, int line, std::string_view key) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = s.find(':', start);
        parts.push_back(s.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    Range r;
    if (parts.size() == 1) {
        r = Range::single(to_double(parts[0], line, key));
    } else if (parts.size() == 3) {
        r = {to_double(parts[0], line, key), to_double(parts[1], line, key),
             to_double(parts[2], line, key)};
    } else {
        throw ConfigParseError(line, fmt::format("'{}' expects a value or lo:hi:step", key));
    }
    if (r.lo == r.hi) r.step = 1.0;
    try {
        r.validate(std::string(key).c_str());
    } catch (const ConfigError& e) {
        throw ConfigParseError(line, e.what());
    }
    return r;
}

std::vector<double> to_list(std::string_view s, int line, std::string_view key) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = s.find(',', start);
        out.push_back(to_double(s.substr(start, comma - start), line, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string to_string(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

double nonnegative(double v, int line, std::string_view key) {
    if (v < 0.0) throw ConfigParseError(line, fmt::format("'{}' must be >= 0 (got {})", key, v));
    return v;
}

using Setter = std::function<void(RunConfig&, std::string_view, int)>;

struct KeySpec {
    const char* section;
    Setter set;
};

const std::map<std::string, KeySpec, std::less<>>& key_table() {
    static const std::map<std::string, KeySpec, std::less<>> table = {
        {"g1", {"model", [](RunConfig& c, std::string_view v, int l) { c.g1 = to_double(v, l, "g1"); }}},
        {"v1", {"model", [](RunConfig& c, std::string_view v, int l) { c.v1 = to_double(v, l, "v1"); }}},
        {"spectrum",
         {"spectrum",
          [](RunConfig& c, std::string_view v, int l) {
              c.spectrum = to_string(v);
              if (c.spectrum != "explicit" && !is_known_preset(c.spectrum)) {
                  throw ConfigParseError(l, fmt::format("unknown spectrum '{}'", c.spectrum));
              }
          }}},
        {"delta",
         {"spectrum",
          [](RunConfig& c, std::string_view v, int l) {
              c.preset_args.delta = nonnegative(to_double(v, l, "delta"), l, "delta");
          }}},
        {"shift", {"spectrum", [](RunConfig& c, std::string_view v, int l) {
                       c.preset_args.shift = to_double(v, l, "shift");
                   }}},
        {"modes",
         {"spectrum",
          [](RunConfig& c, std::string_view v, int l) {
              c.preset_args.modes = to_int(v, l, "modes");
              if (c.preset_args.modes < 1) throw ConfigParseError(l, "'modes' must be >= 1");
          }}},
        {"detunings", {"spectrum", [](RunConfig& c, std::string_view v, int l) {
                           c.explicit_detunings = to_list(v, l, "detunings");
                       }}},
        {"kappa", {"losses", [](RunConfig& c, std::string_view v, int l) {
                       c.losses.kappa = nonnegative(to_double(v, l, "kappa"), l, "kappa");
                   }}},
        {"gamma_atom",
         {"losses",
          [](RunConfig& c, std::string_view v, int l) {
              c.losses.gamma_atom = nonnegative(to_double(v, l, "gamma_atom"), l, "gamma_atom");
          }}},
        {"gamma_fibre",
         {"losses",
          [](RunConfig& c, std::string_view v, int l) {
              c.losses.gamma_fibre = nonnegative(to_double(v, l, "gamma_fibre"), l, "gamma_fibre");
          }}},
        {"delta_g", {"grid", [](RunConfig& c, std::string_view v, int l) {
                         c.delta_g = to_range(v, l, "delta_g");
                     }}},
        {"delta_v", {"grid", [](RunConfig& c, std::string_view v, int l) {
                         c.delta_v = to_range(v, l, "delta_v");
                     }}},
        {"t",
         {"grid",
          [](RunConfig& c, std::string_view v, int l) {
              c.time = to_range(v, l, "t");
              if (c.time.lo < 0.0) throw ConfigParseError(l, "'t' must be >= 0");
          }}},
        {"estimator",
         {"grid",
          [](RunConfig& c, std::string_view v, int l) {
              const auto s = to_string(v);
              if (s == "exact") {
                  c.estimator.kind = EstimatorKind::exact;
              } else if (s == "mc") {
                  c.estimator.kind = EstimatorKind::monte_carlo;
              } else {
                  throw ConfigParseError(l, fmt::format("'estimator' must be exact or mc, got '{}'", s));
              }
          }}},
        {"samples",
         {"grid",
          [](RunConfig& c, std::string_view v, int l) {
              c.estimator.samples = to_int(v, l, "samples");
              if (c.estimator.samples < 1) throw ConfigParseError(l, "'samples' must be >= 1");
          }}},
        {"seed", {"grid", [](RunConfig& c, std::string_view v, int l) {
                      c.estimator.seed = to_u64(v, l, "seed");
                  }}},
        {"dt",
         {"grid",
          [](RunConfig& c, std::string_view v, int l) {
              c.integrator.dt = to_double(v, l, "dt");
              if (!(c.integrator.dt > 0.0)) throw ConfigParseError(l, "'dt' must be > 0");
          }}},
        {"workers", {"grid", [](RunConfig& c, std::string_view v, int l) {
                         c.workers = to_int(v, l, "workers");
                     }}},
        {"out", {"output", [](RunConfig& c, std::string_view v, int) { c.out = to_string(v); }}},
        {"threshold", {"output", [](RunConfig& c, std::string_view v, int l) {
                           c.threshold = to_double(v, l, "threshold");
                       }}},
    };
    return table;
}

const std::set<std::string, std::less<>> kSections = {"model", "spectrum", "losses", "grid",
                                                      "output"};

} // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::map<std::string, int, std::less<>> seen; // key -> line
    std::string section;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigParseError(lineno, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.contains(section)) {
                throw ConfigParseError(lineno, fmt::format("unknown section [{}]", section));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigParseError(lineno, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const auto& table = key_table();
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigParseError(lineno, fmt::format("unknown key '{}'", key));
        if (!section.empty() && section != it->second.section) {
            throw ConfigParseError(lineno, fmt::format("key '{}' belongs in [{}], found in [{}]", key,
                                                       it->second.section, section));
        }
        if (auto [prev, inserted] = seen.emplace(std::string(key), lineno); !inserted) {
            throw ConfigParseError(lineno, fmt::format("duplicate key '{}' (first set on line {})", key,
                                                       prev->second));
        }
        if (value.empty()) throw ConfigParseError(lineno, fmt::format("'{}' has no value", key));
        it->second.set(cfg, value, lineno);
    }

    const int eof = lineno;
    for (const char* required : {"spectrum", "t"}) {
        if (!seen.contains(required)) {
            throw ConfigParseError(eof, fmt::format("missing required key '{}'", required));
        }
    }
    if (cfg.spectrum == "fig3" && !seen.contains("delta")) {
        throw ConfigParseError(eof, "spectrum fig3 requires 'delta'");
    }
    if (cfg.spectrum == "explicit" && !seen.contains("detunings")) {
        throw ConfigParseError(eof, "an explicit spectrum requires 'detunings'");
    }
    return cfg;
}

namespace {

std::string range_text(const Range& r) {
    if (r.lo == r.hi) return fmt::format("{}", r.lo);
    return fmt::format("{}:{}:{}", r.lo, r.hi, r.step);
}

} // namespace

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[model]\n";
    os << fmt::format("g1 = {}\nv1 = {}\n", c.g1, c.v1);
    os << "\n[spectrum]\n";
    os << fmt::format("spectrum = \"{}\"\n", c.spectrum);
    os << fmt::format("delta = {}\nshift = {}\nmodes = {}\n", c.preset_args.delta,
                      c.preset_args.shift, c.preset_args.modes);
    if (!c.explicit_detunings.empty()) {
        os << fmt::format("detunings = {}\n", fmt::join(c.explicit_detunings, ", "));
    }
    os << "\n[losses]\n";
    os << fmt::format("kappa = {}\ngamma_atom = {}\ngamma_fibre = {}\n", c.losses.kappa,
                      c.losses.gamma_atom, c.losses.gamma_fibre);
    os << "\n[grid]\n";
    os << fmt::format("delta_g = {}\ndelta_v = {}\n", range_text(c.delta_g), range_text(c.delta_v));
    // A single time keeps its step implicit.
    os << fmt::format("t = {}\n", range_text(c.time));
    os << fmt::format("estimator = {}\n",
                      c.estimator.kind == EstimatorKind::exact ? "exact" : "mc");
    os << fmt::format("samples = {}\nseed = {}\ndt = {}\nworkers = {}\n", c.estimator.samples,
                      c.estimator.seed, c.integrator.dt, c.workers);
    os << "\n[output]\n";
    if (!c.out.empty()) os << fmt::format("out = \"{}\"\n", c.out);
    os << fmt::format("threshold = {}\n", c.threshold);
    return os.str();
}

} // namespace fibregate
