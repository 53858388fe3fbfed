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

#include "qdiag/spinmodels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qdiag/error.hpp"

namespace qdiag {

void IsingModel::set_h(int i, double value) {
    h_.at(static_cast<std::size_t>(i)) = value;
}

void IsingModel::add_h(int i, double value) {
    h_.at(static_cast<std::size_t>(i)) += value;
}

double IsingModel::J(int i, int j) const {
    if (i > j) {
        std::swap(i, j);
    }
    auto it = J_.find({i, j});
    return it == J_.end() ? 0.0 : it->second;
}

void IsingModel::add_J(int i, int j, double value) {
    if (i == j) {
        throw InvalidArgument("Ising models have no self-couplings");
    }
    if (i < 0 || j < 0 || i >= size() || j >= size()) {
        throw InvalidArgument("coupling index out of range");
    }
    if (i > j) {
        std::swap(i, j);
    }
    if (value == 0.0) {
        return;
    }
    auto [it, inserted] = J_.try_emplace({i, j}, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0.0) {
            J_.erase(it);
        }
    }
}

void IsingModel::set_J(int i, int j, double value) {
    if (i > j) {
        std::swap(i, j);
    }
    J_.erase({i, j});
    add_J(i, j, value);
}

double IsingModel::max_abs_h() const {
    double m = 0.0;
    for (double v : h_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double IsingModel::max_abs_J() const {
    double m = 0.0;
    for (const auto& [ij, v] : J_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Gauge Gauge::identity(int n) {
    return Gauge{std::vector<Spin>(static_cast<std::size_t>(n), 1)};
}

Gauge Gauge::random(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Gauge g;
    g.signs.resize(static_cast<std::size_t>(n));
    for (auto& a : g.signs) {
        a = (rng() >> 63) ? Spin{1} : Spin{-1};
    }
    return g;
}

IsingModel qubo_to_ising(const Qubo& q) {
    IsingModel m(q.size());
    double offset = q.offset();
    for (const auto& [ij, c] : q.coefficients()) {
        const auto [i, j] = ij;
        if (i == j) {
            m.add_h(i, c / 2.0);
            offset += c / 2.0;
        } else {
            m.add_J(i, j, c / 4.0);
            m.add_h(i, c / 4.0);
            m.add_h(j, c / 4.0);
            offset += c / 4.0;
        }
    }
    m.set_offset(offset);
    return m;
}

Qubo ising_to_qubo(const IsingModel& m, VariableRegistry registry) {
    if (registry.size() != m.size()) {
        throw InvalidArgument("registry size does not match the Ising model");
    }
    Qubo q(std::move(registry));
    double offset = m.offset();
    for (int i = 0; i < m.size(); ++i) {
        q.add(i, i, 2.0 * m.h(i));
        offset -= m.h(i);
    }
    for (const auto& [ij, c] : m.J()) {
        q.add(ij.first, ij.second, 4.0 * c);
        q.add(ij.first, ij.first, -2.0 * c);
        q.add(ij.second, ij.second, -2.0 * c);
        offset += c;
    }
    q.add_offset(offset);
    return q;
}

Qubo ising_to_qubo(const IsingModel& m) {
    return ising_to_qubo(m, VariableRegistry::generic(m.size()));
}

IsingModel apply_gauge(const IsingModel& m, const Gauge& g) {
    if (g.size() != m.size()) {
        throw InvalidArgument("gauge length does not match the model");
    }
    IsingModel out(m.size());
    for (int i = 0; i < m.size(); ++i) {
        out.set_h(i, g.signs[static_cast<std::size_t>(i)] * m.h(i));
    }
    for (const auto& [ij, c] : m.J()) {
        out.add_J(ij.first, ij.second,
                  g.signs[static_cast<std::size_t>(ij.first)] * g.signs[static_cast<std::size_t>(ij.second)] * c);
    }
    out.set_offset(m.offset());
    return out;
}

SpinVector ungauge_sample(std::span<const Spin> s, const Gauge& g) {
    if (static_cast<int>(s.size()) != g.size()) {
        throw InvalidArgument("gauge length does not match the sample");
    }
    SpinVector out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = static_cast<Spin>(s[i] * g.signs[i]);
    }
    return out;
}

NormalizedModel normalize(const IsingModel& m) {
    double scale = 1.0;
    const double mh = m.max_abs_h();
    const double mj = m.max_abs_J();
    if (mh > 0.0) {
        scale = std::min(scale, 2.0 / mh);
    }
    if (mj > 0.0) {
        scale = std::min(scale, 1.0 / mj);
    }
    if (scale == 1.0) {
        return {m, 1.0};
    }
    IsingModel out(m.size());
    for (int i = 0; i < m.size(); ++i) {
        out.set_h(i, m.h(i) * scale);
    }
    for (const auto& [ij, c] : m.J()) {
        out.add_J(ij.first, ij.second, c * scale);
    }
    out.set_offset(m.offset() * scale);
    return {std::move(out), scale};
}

double ising_energy(const IsingModel& m, std::span<const Spin> s) {
    if (static_cast<int>(s.size()) != m.size()) {
        throw InvalidArgument("spin vector has " + std::to_string(s.size()) + " entries, expected " +
                              std::to_string(m.size()));
    }
    double e = m.offset();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != 1 && s[i] != -1) {
            throw InvalidArgument("spins must be +1 or -1");
        }
        e += m.h()[i] * s[i];
    }
    for (const auto& [ij, c] : m.J()) {
        e += c * s[static_cast<std::size_t>(ij.first)] * s[static_cast<std::size_t>(ij.second)];
    }
    return e;
}

SpinVector spins_from_bits(std::span<const std::uint8_t> bits) {
    SpinVector s(bits.size());
    std::transform(bits.begin(), bits.end(), s.begin(), [](std::uint8_t b) { return b ? Spin{1} : Spin{-1}; });
    return s;
}

std::vector<std::uint8_t> bits_from_spins(std::span<const Spin> s) {
    std::vector<std::uint8_t> bits(s.size());
    std::transform(s.begin(), s.end(), bits.begin(), [](Spin v) { return static_cast<std::uint8_t>(v > 0); });
    return bits;
}

}  // namespace qdiag
