// Copyright 2026 The qdiag Authors
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

#include "qdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdiag/error.hpp"
#include "qdiag/seed.hpp"

namespace qdiag {

double estimate_ps(const SampleSet& samples, double ground_energy, double tol) {
    if (samples.total_reads == 0) {
        throw InvalidArgument("cannot estimate a success probability from zero reads");
    }
    std::uint64_t hits = 0;
    for (const auto& r : samples.records) {
        if (std::abs(r.energy - ground_energy) <= tol) {
            hits += r.occurrences;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples.total_reads);
}

std::optional<std::uint64_t> repetitions(double p_s, double certainty) {
    if (!(p_s >= 0.0 && p_s <= 1.0)) {
        throw InvalidArgument("success probability must lie in [0, 1]");
    }
    if (!(certainty > 0.0 && certainty < 1.0)) {
        throw InvalidArgument("target certainty must lie in (0, 1)");
    }
    if (p_s == 0.0) {
        return std::nullopt;
    }
    if (p_s == 1.0) {
        return 1;
    }
    const double ratio = std::log1p(-certainty) / std::log1p(-p_s);
    // Absorb rounding so that an exact integer ratio is not bumped up by one.
    const double r = std::ceil(ratio - 1e-9 * std::max(1.0, ratio));
    return static_cast<std::uint64_t>(std::max(1.0, r));
}

double time_to_solution(std::uint64_t repetitions, double anneal_time) {
    if (!(anneal_time > 0.0)) {
        throw InvalidArgument("anneal time must be positive");
    }
    return static_cast<double>(repetitions) * anneal_time;
}

SolveStats solve_stats(std::uint64_t ground_hits, std::uint64_t reads, double anneal_time, double certainty) {
    if (reads == 0) {
        throw InvalidArgument("read count must be positive");
    }
    if (ground_hits > reads) {
        throw InvalidArgument("more ground-state hits than reads");
    }
    SolveStats s;
    s.ground_hits = ground_hits;
    s.reads = reads;
    s.p_s = static_cast<double>(ground_hits) / static_cast<double>(reads);
    s.certainty = certainty;
    s.anneal_time = anneal_time;
    s.repetitions = repetitions(s.p_s, certainty);
    if (s.repetitions) {
        s.time_to_solution = time_to_solution(*s.repetitions, anneal_time);
    }
    return s;
}

double GaugeRow::mean_hits() const {
    if (hits.empty()) return 0.0;
    return static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0})) /
           static_cast<double>(hits.size());
}

std::uint64_t GaugeRow::min_hits() const {
    return hits.empty() ? 0 : *std::min_element(hits.begin(), hits.end());
}

std::uint64_t GaugeRow::max_hits() const {
    return hits.empty() ? 0 : *std::max_element(hits.begin(), hits.end());
}

double GaugeRow::p_s() const {
    if (reads_per_repetition == 0) {
        throw InvalidArgument("gauge row without reads");
    }
    return mean_hits() / static_cast<double>(reads_per_repetition);
}

GaugeSummary summarize_gauges(std::vector<GaugeRow> gauges, double anneal_time, double certainty) {
    if (gauges.empty()) {
        throw InvalidArgument("at least one gauge is required");
    }
    if (!(anneal_time > 0.0)) {
        throw InvalidArgument("anneal time must be positive");
    }
    GaugeSummary out;
    out.anneal_time = anneal_time;
    out.certainty = certainty;

    auto row_for = [&](const std::string& label, double p) {
        AggregateRow row{label, std::nullopt, std::nullopt};
        if (auto r = repetitions(p, certainty)) {
            row.repetitions = static_cast<double>(*r);
            row.time_to_solution = time_to_solution(*r, anneal_time);
        }
        return row;
    };

    out.no_gauge = row_for("No Gauge", gauges.front().p_s());

    std::size_t best = 0;
    for (std::size_t g = 1; g < gauges.size(); ++g) {
        if (gauges[g].p_s() > gauges[best].p_s()) {
            best = g;
        }
    }
    out.best_gauge = row_for("Best Gauge", gauges[best].p_s());

    out.average.label = "Average";
    double sum_r = 0.0;
    double sum_t = 0.0;
    bool bounded = true;
    for (const auto& g : gauges) {
        auto r = repetitions(g.p_s(), certainty);
        if (!r) {
            bounded = false;
            break;
        }
        sum_r += static_cast<double>(*r);
        sum_t += time_to_solution(*r, anneal_time);
    }
    if (bounded) {
        out.average.repetitions = sum_r / static_cast<double>(gauges.size());
        out.average.time_to_solution = sum_t / static_cast<double>(gauges.size());
    }
    out.gauges = std::move(gauges);
    return out;
}

GaugeSummary gauge_experiment(const IsingModel& m, const GaugeExperimentConfig& config) {
    if (config.gauges < 1 || config.repetitions < 1) {
        throw InvalidArgument("gauge experiment needs at least one gauge and one repetition");
    }
    std::vector<GaugeRow> rows;
    for (int g = 1; g <= config.gauges; ++g) {
        const Gauge gauge = g == 1 ? Gauge::identity(m.size())
                                   : Gauge::random(m.size(), derive_seed(config.anneal.seed, "gauge",
                                                                         static_cast<std::uint64_t>(g)));
        const IsingModel gauged = apply_gauge(m, gauge);
        GaugeRow row;
        row.gauge = g;
        row.reads_per_repetition = config.anneal.reads;
        for (int rep = 0; rep < config.repetitions; ++rep) {
            AnnealConfig ac = config.anneal;
            ac.seed = derive_seed(config.anneal.seed, "gauge-run",
                                  static_cast<std::uint64_t>(g) * 1000003ULL + static_cast<std::uint64_t>(rep));
            const SampleSet raw = simulated_anneal(gauged, ac);
            std::uint64_t hits = 0;
            for (const auto& rec : raw.records) {
                const SpinVector original = ungauge_sample(rec.spins, gauge);
                if (std::abs(ising_energy(m, original) - config.ground_energy) <= config.tolerance) {
                    hits += rec.occurrences;
                }
            }
            row.hits.push_back(hits);
        }
        rows.push_back(std::move(row));
    }
    return summarize_gauges(std::move(rows), config.anneal_time, config.certainty);
}

}  // namespace qdiag
