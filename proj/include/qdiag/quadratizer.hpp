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
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qdiag/energy.hpp"
#include "qdiag/netmodel.hpp"

namespace qdiag {

// coefficient * y * x_deep * x_shallow, where x_deep sits further from the root.
struct CubicTerm {
    int sensor_var;
    int deep_var;
    int shallow_var;
    double coefficient;

    bool operator==(const CubicTerm&) const = default;
};

struct Substitution {
    enum class Kind {
        Pair,    // x_deep * x_shallow -> a
        Sensor,  // y * x -> a
    };
    Kind kind;
    // Pair: (deep CB var, shallow CB var). Sensor: (sensor var, CB var).
    int first;
    int second;
    int ancilla_var;
    std::vector<CubicTerm> collapsed;
};

struct ReductionPlan {
    std::vector<Substitution> substitutions;
    int ancilla_count() const { return static_cast<int>(substitutions.size()); }
};

// Quadratic pseudo-boolean form E0 + sum_{i<=j} Q_ij q_i q_j, stored upper
// triangular (Q_ii are the linear weights) without explicit zeros.
class Qubo {
  public:
    Qubo() = default;
    explicit Qubo(VariableRegistry registry) : registry_(std::move(registry)) {}

    int size() const { return registry_.size(); }
    const VariableRegistry& registry() const { return registry_; }

    void add(int i, int j, double coefficient);
    void add_offset(double value) { offset_ += value; }
    double offset() const { return offset_; }
    double coefficient(int i, int j) const;
    const std::map<std::pair<int, int>, double>& coefficients() const { return coefficients_; }

    double energy(std::span<const std::uint8_t> bits) const;

    bool operator==(const Qubo&) const = default;

  private:
    VariableRegistry registry_;
    std::map<std::pair<int, int>, double> coefficients_;
    double offset_ = 0.0;
};

// Replaces y_i(1 - f_i) by y_i(D - sum_{j in P_i} x_j) on every HIGH path.
PseudoBoolean substitute_high_readout(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs);

// Replaces y_i f_i by y_i(1 - D + sum_{j in P_i} x_j)^2 on every LOW path.
// The square is zero exactly when the path carries a single fault.
PseudoBoolean substitute_low_readout(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs);

// Picks one substitution per group of cubic terms y x_n x_m. Terms are grouped
// by their deeper CB n at level d: when more than d-1 LOW sensors sit under n
// (and k^(D-d) >= d-1 leaves room for that), the d-1 products x_n x_m are
// replaced once and shared by every such sensor; otherwise each sensor gets a
// private y x_n replacement. Pair substitutions are numbered first (by CB),
// then sensor substitutions by sensor index from the leaf inward.
ReductionPlan plan_reduction(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs);

// weight * (uv - 2ua - 2va + 3a): zero iff a = uv, at least weight otherwise.
PseudoBoolean ancilla_gadget(int u, int v, int a, double weight, const VariableRegistry& registry);

// Applies the plan to `poly` and adds one gadget per ancilla. Without a
// uniform weight each gadget gets 1 + the sum of |coefficients| of the
// reduced terms that mention its ancilla.
PseudoBoolean apply_reduction(const PseudoBoolean& poly, const ReductionPlan& plan,
                              std::optional<double> uniform_weight = std::nullopt);

// Folds a polynomial of degree <= 2 into a Qubo.
Qubo to_qubo(const PseudoBoolean& poly);

// Every intermediate of the compilation, for inspection and testing.
struct Compilation {
    PseudoBoolean problem;
    PseudoBoolean substituted;
    ReductionPlan plan;
    PseudoBoolean reduced;
    Qubo qubo;
};

Compilation compile(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params);

Qubo quadratize(const PseudoBoolean& problem, const PowerNetwork& net, const Observation& obs,
                const PenaltyParams& params);

}  // namespace qdiag
