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
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdiag/quadratizer.hpp"
#include "qdiag/spinmodels.hpp"

namespace qdiag {

// Chimera topology: rows x cols unit cells, each a complete bipartite graph
// between two partitions of `shore` qubits. Left-partition qubits also couple
// to the same position in the cells above and below, right-partition qubits
// to the cells left and right.
//
// Qubit index = ((row * cols + col) * 2 + side) * shore + k, side 0 = left.
class HardwareGraph {
  public:
    static HardwareGraph chimera(int rows, int cols, int shore, std::set<int> broken = {});

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int shore() const { return shore_; }
    const std::set<int>& broken() const { return broken_; }

    int num_qubits() const { return rows_ * cols_ * 2 * shore_; }
    int usable_count() const { return num_qubits() - static_cast<int>(broken_.size()); }
    bool usable(int q) const;
    // Neighbors among usable qubits; empty for broken ones.
    const std::vector<int>& neighbors(int q) const { return adjacency_.at(static_cast<std::size_t>(q)); }
    bool has_edge(int a, int b) const;
    int edge_count() const;

    int qubit(int row, int col, int side, int k) const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    int shore_ = 0;
    std::set<int> broken_;
    std::vector<std::vector<int>> adjacency_;
};

HardwareGraph build_chimera(int rows, int cols, int shore, const std::set<int>& broken = {});

struct LogicalGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted

    static LogicalGraph from_qubo(const Qubo& q);
    static LogicalGraph from_ising(const IsingModel& m);
    std::vector<std::vector<int>> adjacency() const;
};

// Logical variable -> chain of physical qubits.
struct Embedding {
    std::vector<std::vector<int>> chains;

    int size() const { return static_cast<int>(chains.size()); }
    int physical_qubit_count() const;
    int max_chain_length() const;
    bool operator==(const Embedding&) const = default;
};

struct EmbeddingCheck {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

// Chains nonempty, on usable qubits, pairwise disjoint and connected; every
// logical edge joined by some physical edge.
EmbeddingCheck check_embedding(const Embedding& e, const LogicalGraph& g, const HardwareGraph& hw);

struct EmbedOptions {
    // Successful restarts compared before returning the smallest.
    int restarts = 8;
    // Attempts allowed before giving up.
    int max_restarts = 64;
    // Chain-rerouting sweeps per attempt while chains still overlap.
    int overlap_passes = 40;
    // Shrinking sweeps once the embedding is valid.
    int refine_passes = 20;
};

// Heuristic minor embedding by iterated shortest-path chain placement with
// overlap penalties that grow each sweep, followed by shrinking sweeps.
// Deterministic for a fixed seed. Throws EmbeddingNotFound.
Embedding find_embedding(const LogicalGraph& g, const HardwareGraph& hw, std::uint64_t seed,
                         const EmbedOptions& options = {});

// 1 + max(max|h|/2, max|J|).
double default_chain_strength(const IsingModel& m);

struct EmbeddedModel {
    IsingModel physical;  // over all hardware qubits, normalized
    double scale = 1.0;
    double chain_strength = 0.0;
    int chain_edge_count = 0;

    // For chain-intact states: E_physical = scale * (E_logical + chain_offset()).
    double chain_offset() const { return -chain_strength * chain_edge_count; }
};

// Splits each h_i evenly over its chain, places each J_uv on one connecting
// edge, couples every edge inside a chain at -chain_strength, then
// normalizes to hardware ranges.
EmbeddedModel embed_ising(const IsingModel& m, const Embedding& e, const HardwareGraph& hw,
                          std::optional<double> chain_strength = std::nullopt);

struct DecodedSample {
    SpinVector spins;
    double broken_fraction = 0.0;
};

// Majority vote per chain; exact ties go to a seeded coin.
std::vector<DecodedSample> decode_samples(std::span<const SpinVector> physical, const Embedding& e,
                                          std::uint64_t seed);

}  // namespace qdiag
