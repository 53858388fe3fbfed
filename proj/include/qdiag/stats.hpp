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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdiag/solvers.hpp"
#include "qdiag/spinmodels.hpp"

namespace qdiag {

// Fraction of reads whose energy lies within `tol` of the ground energy.
double estimate_ps(const SampleSet& samples, double ground_energy, double tol = 1e-9);

// Repetitions needed to see a success with probability `certainty`:
// ceil(log(1 - P) / log(1 - p_s)). Unset when p_s = 0 (never found).
std::optional<std::uint64_t> repetitions(double p_s, double certainty = 0.99);

// R * t_a, in seconds.
double time_to_solution(std::uint64_t repetitions, double anneal_time);

struct SolveStats {
    std::uint64_t ground_hits = 0;
    std::uint64_t reads = 0;
    double p_s = 0.0;
    double certainty = 0.99;
    double anneal_time = 0.0;
    std::optional<std::uint64_t> repetitions;
    std::optional<double> time_to_solution;
};

SolveStats solve_stats(std::uint64_t ground_hits, std::uint64_t reads, double anneal_time, double certainty = 0.99);

struct GaugeRow {
    int gauge = 0;  // 1-based; gauge 1 is the identity
    std::vector<std::uint64_t> hits;  // one entry per repetition
    std::uint64_t reads_per_repetition = 0;

    double mean_hits() const;
    std::uint64_t min_hits() const;
    std::uint64_t max_hits() const;
    double p_s() const;
};

struct AggregateRow {
    std::string label;
    std::optional<double> repetitions;
    std::optional<double> time_to_solution;
};

// Shape of a per-anneal-time block of the gauge comparison table.
struct GaugeSummary {
    double anneal_time = 0.0;
    double certainty = 0.99;
    std::vector<GaugeRow> gauges;
    AggregateRow no_gauge;
    AggregateRow average;
    AggregateRow best_gauge;
};

// No Gauge = gauge 1; Average = arithmetic mean of the per-gauge R and t_QA
// (unset if any gauge never succeeded); Best Gauge = the gauge with the
// highest p_s.
GaugeSummary summarize_gauges(std::vector<GaugeRow> gauges, double anneal_time, double certainty = 0.99);

struct GaugeExperimentConfig {
    int gauges = 20;
    int repetitions = 3;
    AnnealConfig anneal;  // anneal.reads is the read count per repetition
    double ground_energy = 0.0;
    double tolerance = 1e-9;
    double certainty = 0.99;
    double anneal_time = 20e-6;
};

// Runs the sampler on `gauges` gauge-transformed copies of `m` (gauge 1 the
// identity), maps every sample back to the original frame, and counts reads
// at the supplied ground energy.
GaugeSummary gauge_experiment(const IsingModel& m, const GaugeExperimentConfig& config);

}  // namespace qdiag
