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
#include <span>
#include <utility>
#include <vector>

#include "qdiag/quadratizer.hpp"

namespace qdiag {

using Spin = std::int8_t;
using SpinVector = std::vector<Spin>;

// E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over s_i in {-1, +1}.
class IsingModel {
  public:
    IsingModel() = default;
    explicit IsingModel(int n) : h_(static_cast<std::size_t>(n), 0.0) {}

    int size() const { return static_cast<int>(h_.size()); }

    const std::vector<double>& h() const { return h_; }
    double h(int i) const { return h_.at(static_cast<std::size_t>(i)); }
    void set_h(int i, double value);
    void add_h(int i, double value);

    const std::map<std::pair<int, int>, double>& J() const { return J_; }
    double J(int i, int j) const;
    // Self-couplings are rejected; keys are stored with i < j.
    void add_J(int i, int j, double value);
    void set_J(int i, int j, double value);

    double offset() const { return offset_; }
    void set_offset(double value) { offset_ = value; }
    void add_offset(double value) { offset_ += value; }

    double max_abs_h() const;
    double max_abs_J() const;

    bool operator==(const IsingModel&) const = default;

  private:
    std::vector<double> h_;
    std::map<std::pair<int, int>, double> J_;
    double offset_ = 0.0;
};

// Spin-reversal transformation s_i -> a_i s_i.
struct Gauge {
    std::vector<Spin> signs;

    static Gauge identity(int n);
    // Independent fair +-1 entries.
    static Gauge random(int n, std::uint64_t seed);
    int size() const { return static_cast<int>(signs.size()); }
};

struct NormalizedModel {
    IsingModel model;
    double scale;
};

// q_i = (s_i + 1) / 2.
IsingModel qubo_to_ising(const Qubo& q);
Qubo ising_to_qubo(const IsingModel& m);
Qubo ising_to_qubo(const IsingModel& m, VariableRegistry registry);

IsingModel apply_gauge(const IsingModel& m, const Gauge& g);
SpinVector ungauge_sample(std::span<const Spin> s, const Gauge& g);

// Uniform rescaling into |h_i| <= 2, |J_ij| <= 1; the offset is scaled too.
NormalizedModel normalize(const IsingModel& m);

double ising_energy(const IsingModel& m, std::span<const Spin> s);

SpinVector spins_from_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> bits_from_spins(std::span<const Spin> s);

}  // namespace qdiag
