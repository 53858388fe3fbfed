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
#include <span>
#include <vector>

#include "qdiag/energy.hpp"
#include "qdiag/netmodel.hpp"
#include "qdiag/quadratizer.hpp"
#include "qdiag/spinmodels.hpp"

namespace qdiag {

struct SampleRecord {
    SpinVector spins;
    double energy = 0.0;
    std::uint64_t occurrences = 0;

    bool operator==(const SampleRecord&) const = default;
};

struct AnnealInfo {
    std::uint64_t seed = 0;
    int sweeps = 0;
    double beta_start = 0.0;
    double beta_end = 0.0;

    bool operator==(const AnnealInfo&) const = default;
};

// Distinct states with occurrence counts, sorted by energy then state.
struct SampleSet {
    std::vector<SampleRecord> records;
    std::uint64_t total_reads = 0;
    AnnealInfo info;

    // Groups identical states; energies come from `m`.
    static SampleSet from_reads(std::span<const SpinVector> reads, const IsingModel& m, AnnealInfo info = {});
    double lowest_energy() const;

    bool operator==(const SampleSet&) const = default;
};

struct AnnealConfig {
    std::uint64_t reads = 1000;
    int sweeps = 1000;
    double beta_start = 0.1;
    // Unset: 2 * the largest |h_i| or |J_ij| of the model.
    std::optional<double> beta_end;
    std::uint64_t seed = 0;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

// Single-spin-flip Metropolis annealing, one independent restart per read,
// inverse temperature geometric from beta_start to beta_end. Read r is seeded
// from (seed, r), so results do not depend on the thread count.
SampleSet simulated_anneal(const IsingModel& m, const AnnealConfig& config);

double default_beta_end(const IsingModel& m);

constexpr int kBruteForceLimit = 26;

// Bit k of a state is variable k (1 = true, or spin +1).
struct BruteForceResult {
    double min_energy = 0.0;
    std::vector<std::uint64_t> minimizers;
};

BruteForceResult brute_force_minimize(const Qubo& q);
BruteForceResult brute_force_minimize(const IsingModel& m);

std::vector<std::uint8_t> bits_of_state(std::uint64_t state, int n);

// Minimal diagnoses straight from the tree structure.
struct DiagnosisCore {
    int min_faults = 0;
    std::uint64_t multiplicity = 0;  // saturates at UINT64_MAX
    FaultSet witness;
};

// Dynamic program over CBs with state "a fault already cuts this subtree".
// Never places a CB fault below another one, which makes the multiplicity
// count exact. Linear in the number of CBs.
DiagnosisCore tree_dp_diagnose(const PowerNetwork& net, const Observation& obs);

// Every minimal diagnosis, up to `limit` of them, in canonical order.
std::vector<FaultSet> enumerate_minimal_diagnoses(const PowerNetwork& net, const Observation& obs,
                                                  std::size_t limit = 1u << 16);

// Orders fault sets by size, then by their sorted component variables
// (CBs before sensors).
bool candidate_less(const FaultSet& a, const FaultSet& b);

struct Candidate {
    FaultSet faults;
    double energy = 0.0;  // lowest sampled energy for this diagnosis
    std::uint64_t occurrences = 0;
};

struct DiagnosisReport {
    int oracle_min_faults = 0;
    std::uint64_t oracle_multiplicity = 0;
    std::optional<int> sampled_min_faults;
    // Consistent sampled diagnoses, deduplicated and ranked.
    std::vector<Candidate> candidates;
    std::uint64_t inconsistent_reads = 0;
    bool agrees = false;

    std::size_t optimal_candidate_count() const;
};

// Builds a report from samples over the compiled variables (x, y, ancillas).
DiagnosisReport build_report(const PowerNetwork& net, const Observation& obs, const SampleSet& samples);

// Compile, convert to spins, anneal, filter consistent states and rank them.
DiagnosisReport diagnose(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params,
                         const AnnealConfig& config);

}  // namespace qdiag
