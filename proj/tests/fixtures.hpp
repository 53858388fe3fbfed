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

// Reference instances and small brute-force helpers shared by the tests.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "qdiag/energy.hpp"
#include "qdiag/netmodel.hpp"
#include "qdiag/solvers.hpp"
#include "qdiag/spinmodels.hpp"

namespace qdiag::testing {

inline PowerNetwork five_cb() { return PowerNetwork::build_tree(4, 2); }
inline PowerNetwork quaternary() { return PowerNetwork::build_tree(4, 3); }

inline const char* const kFiveCbReadout = "0001";
inline const char* const kSixFaultReadout = "0101 0101 0101 1111";

struct TableRow {
    int arity;
    int depth;
    const char* readout;
    int faults;
    int logical;      // exact n_l, or the upper bound when `bound_only`
    bool bound_only;
};

inline const std::vector<TableRow>& table_rows() {
    static const std::vector<TableRow> rows = {
        {4, 2, "0001", 2, 12, false},
        {4, 3, "0101 0111 1111 1111", 3, 42, false},
        {4, 3, "0101 0101 1111 1111", 4, 45, true},
        {4, 3, "0101 0101 0111 1111", 5, 46, true},
        {4, 3, "0101 0101 0101 1111", 6, 46, false},
        {4, 3, "0101 0101 0101 0111", 7, 48, false},
        {4, 3, "0101 0101 0101 0101", 8, 49, false},
        {4, 4, "0111 1111 0111 1111 0111 1111 1011 1111 0111 1111 1111 1111 0111 1111 1111 1111", 6, 165, false},
    };
    return rows;
}

inline std::vector<std::uint8_t> bits(std::uint64_t state, int n) { return bits_of_state(state, n); }

// Minimal fault sets by direct enumeration of every x/y assignment.
struct Enumerated {
    int min_faults = std::numeric_limits<int>::max();
    std::set<FaultSet> minimal;
};

inline Enumerated enumerate_consistent(const PowerNetwork& net, const Observation& obs) {
    const int n = net.cb_count() + net.sensor_count();
    Enumerated out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        const auto a = bits(s, n);
        if (!is_consistent(net, obs, a)) continue;
        const FaultSet f = faults_of(net, a);
        const int k = static_cast<int>(f.size());
        if (k < out.min_faults) {
            out.min_faults = k;
            out.minimal.clear();
        }
        if (k == out.min_faults) out.minimal.insert(f);
    }
    return out;
}

inline IsingModel random_ising(int n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::bernoulli_distribution keep(density);
    IsingModel m(n);
    for (int i = 0; i < n; ++i) m.set_h(i, coeff(rng));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (keep(rng)) m.set_J(i, j, coeff(rng));
        }
    }
    m.set_offset(coeff(rng));
    return m;
}

inline SpinVector random_spins(int n, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    SpinVector s(static_cast<std::size_t>(n));
    for (auto& v : s) v = coin(rng) ? Spin{1} : Spin{-1};
    return s;
}

inline std::vector<std::uint8_t> random_bits(int n, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> b(static_cast<std::size_t>(n));
    for (auto& v : b) v = coin(rng) ? 1 : 0;
    return b;
}

}  // namespace qdiag::testing
