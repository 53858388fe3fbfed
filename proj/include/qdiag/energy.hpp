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
#include <string>
#include <vector>

#include "qdiag/netmodel.hpp"

namespace qdiag {

enum class VarRole { Cb, Sensor, Ancilla, Generic };

std::string to_string(VarRole role);
VarRole parse_var_role(const std::string& text);

// Dense numbering of the logical binary variables: CB variables x_1..x_nCB
// first, then sensor variables y_1..y_nSensor, then ancillas a_1..a_nA.
// Models that did not come from a network use Generic variables q_1..q_n.
class VariableRegistry {
  public:
    VariableRegistry() = default;
    VariableRegistry(int cb_count, int sensor_count, int ancilla_count = 0);
    static VariableRegistry generic(int n);

    int size() const { return cb_count_ + sensor_count_ + ancilla_count_ + generic_count_; }
    int cb_count() const { return cb_count_; }
    int sensor_count() const { return sensor_count_; }
    int ancilla_count() const { return ancilla_count_; }

    int cb_var(int cb) const;
    int sensor_var(int sensor) const;
    int ancilla_var(int ancilla) const;

    VarRole role(int var) const;
    // 1-based index within the variable's namespace.
    int local_index(int var) const;
    std::string label(int var) const;

    VariableRegistry with_ancillas(int count) const;

    bool operator==(const VariableRegistry&) const = default;

  private:
    void check(int var) const;

    int cb_count_ = 0;
    int sensor_count_ = 0;
    int ancilla_count_ = 0;
    int generic_count_ = 0;
};

using Monomial = std::vector<int>;

// Multilinear polynomial over binary variables. Keys are sorted index sets
// with no repeats (x^2 folds to x on insertion); zero terms are dropped.
class PseudoBoolean {
  public:
    PseudoBoolean() = default;
    explicit PseudoBoolean(VariableRegistry registry) : registry_(std::move(registry)) {}

    const VariableRegistry& registry() const { return registry_; }
    void set_registry(VariableRegistry registry) { registry_ = std::move(registry); }

    void add_term(Monomial vars, double coefficient);
    void add_constant(double value) { constant_ += value; }
    // Removes the term with this key (already canonical) and returns its coefficient.
    double take_term(const Monomial& key);

    double constant() const { return constant_; }
    double coefficient(Monomial vars) const;
    const std::map<Monomial, double>& terms() const { return terms_; }
    int degree() const;

    double evaluate(std::span<const std::uint8_t> assignment) const;

    PseudoBoolean& operator+=(const PseudoBoolean& other);
    PseudoBoolean& operator*=(double factor);
    friend PseudoBoolean operator+(PseudoBoolean a, const PseudoBoolean& b) { return a += b; }
    friend PseudoBoolean operator*(const PseudoBoolean& a, const PseudoBoolean& b);
    friend PseudoBoolean operator*(PseudoBoolean a, double f) { return a *= f; }

  private:
    VariableRegistry registry_;
    std::map<Monomial, double> terms_;
    double constant_ = 0.0;
};

// Canonical key for a product of variables.
Monomial canonical_monomial(Monomial vars);

struct PenaltyParams {
    double lambda_path = 3.0;
    double lambda_fault_cb = 1.0;
    double lambda_fault_sensor = 1.0;
    // Uniform ancilla gadget weight; unset means the per-ancilla automatic
    // weight chosen by the quadratizer.
    std::optional<double> lambda_ancilla;

    // Throws InvalidArgument unless all weights are positive and
    // lambda_path > max(lambda_fault_cb, lambda_fault_sensor).
    void validate() const;

    bool operator==(const PenaltyParams&) const = default;
};

// lambda_path * sum_i y_i * xor(f_i, l_i) with f_i the product of CB
// variables on the i-th path.
PseudoBoolean consistency_term(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params);
PseudoBoolean fault_count_term(const PowerNetwork& net, const PenaltyParams& params);
PseudoBoolean build_problem(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params);

double evaluate(const PseudoBoolean& poly, std::span<const std::uint8_t> assignment);

// True iff every healthy sensor's readout matches the power reaching it.
// `assignment` is indexed by the registry (x then y); extra entries such as
// ancillas are ignored.
bool is_consistent(const PowerNetwork& net, const Observation& obs, std::span<const std::uint8_t> assignment);

// Faults encoded in an x/y assignment.
FaultSet faults_of(const PowerNetwork& net, std::span<const std::uint8_t> assignment);
// The x/y assignment (1 = healthy) corresponding to a fault set.
std::vector<std::uint8_t> assignment_of(const PowerNetwork& net, const FaultSet& faults);

}  // namespace qdiag
