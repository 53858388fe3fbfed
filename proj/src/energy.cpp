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

#include "qdiag/energy.hpp"

#include <algorithm>
#include <cmath>

#include "qdiag/error.hpp"

namespace qdiag {

namespace {

// Coefficients that cancel to within this are treated as exact zeros.
constexpr double kZeroTolerance = 1e-12;

}  // namespace

std::string to_string(VarRole role) {
    switch (role) {
        case VarRole::Cb:
            return "cb";
        case VarRole::Sensor:
            return "sensor";
        case VarRole::Ancilla:
            return "ancilla";
        case VarRole::Generic:
            return "generic";
    }
    return "generic";
}

VarRole parse_var_role(const std::string& text) {
    if (text == "cb") return VarRole::Cb;
    if (text == "sensor") return VarRole::Sensor;
    if (text == "ancilla") return VarRole::Ancilla;
    if (text == "generic") return VarRole::Generic;
    throw InvalidArgument("unknown variable role '" + text + "'");
}

VariableRegistry::VariableRegistry(int cb_count, int sensor_count, int ancilla_count)
    : cb_count_(cb_count), sensor_count_(sensor_count), ancilla_count_(ancilla_count) {
    if (cb_count < 0 || sensor_count < 0 || ancilla_count < 0) {
        throw InvalidArgument("variable counts must be nonnegative");
    }
}

VariableRegistry VariableRegistry::generic(int n) {
    if (n < 0) {
        throw InvalidArgument("variable count must be nonnegative");
    }
    VariableRegistry r;
    r.generic_count_ = n;
    return r;
}

void VariableRegistry::check(int var) const {
    if (var < 0 || var >= size()) {
        throw InvalidArgument("variable index " + std::to_string(var) + " out of range");
    }
}

int VariableRegistry::cb_var(int cb) const {
    if (cb < 1 || cb > cb_count_) {
        throw InvalidArgument("circuit breaker " + std::to_string(cb) + " not in registry");
    }
    return cb - 1;
}

int VariableRegistry::sensor_var(int sensor) const {
    if (sensor < 1 || sensor > sensor_count_) {
        throw InvalidArgument("sensor " + std::to_string(sensor) + " not in registry");
    }
    return cb_count_ + sensor - 1;
}

int VariableRegistry::ancilla_var(int ancilla) const {
    if (ancilla < 1 || ancilla > ancilla_count_) {
        throw InvalidArgument("ancilla " + std::to_string(ancilla) + " not in registry");
    }
    return cb_count_ + sensor_count_ + ancilla - 1;
}

VarRole VariableRegistry::role(int var) const {
    check(var);
    if (generic_count_ > 0) return VarRole::Generic;
    if (var < cb_count_) return VarRole::Cb;
    if (var < cb_count_ + sensor_count_) return VarRole::Sensor;
    return VarRole::Ancilla;
}

int VariableRegistry::local_index(int var) const {
    switch (role(var)) {
        case VarRole::Cb:
        case VarRole::Generic:
            return var + 1;
        case VarRole::Sensor:
            return var - cb_count_ + 1;
        case VarRole::Ancilla:
            return var - cb_count_ - sensor_count_ + 1;
    }
    return var + 1;
}

std::string VariableRegistry::label(int var) const {
    static constexpr char kPrefix[] = {'x', 'y', 'a', 'q'};
    return kPrefix[static_cast<int>(role(var))] + std::to_string(local_index(var));
}

VariableRegistry VariableRegistry::with_ancillas(int count) const {
    if (generic_count_ > 0) {
        throw InvalidArgument("generic registries cannot carry ancillas");
    }
    return VariableRegistry(cb_count_, sensor_count_, count);
}

Monomial canonical_monomial(Monomial vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

void PseudoBoolean::add_term(Monomial vars, double coefficient) {
    if (coefficient == 0.0) {
        return;
    }
    vars = canonical_monomial(std::move(vars));
    if (vars.empty()) {
        constant_ += coefficient;
        return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(vars), coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (std::abs(it->second) <= kZeroTolerance) {
            terms_.erase(it);
        }
    }
}

double PseudoBoolean::take_term(const Monomial& key) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        return 0.0;
    }
    double c = it->second;
    terms_.erase(it);
    return c;
}

double PseudoBoolean::coefficient(Monomial vars) const {
    vars = canonical_monomial(std::move(vars));
    if (vars.empty()) {
        return constant_;
    }
    auto it = terms_.find(vars);
    return it == terms_.end() ? 0.0 : it->second;
}

int PseudoBoolean::degree() const {
    int d = 0;
    for (const auto& [key, c] : terms_) {
        d = std::max(d, static_cast<int>(key.size()));
    }
    return d;
}

double PseudoBoolean::evaluate(std::span<const std::uint8_t> assignment) const {
    if (static_cast<int>(assignment.size()) != registry_.size()) {
        throw InvalidArgument("assignment has " + std::to_string(assignment.size()) + " entries, expected " +
                              std::to_string(registry_.size()));
    }
    double value = constant_;
    for (const auto& [key, c] : terms_) {
        bool on = true;
        for (int v : key) {
            if (!assignment[static_cast<std::size_t>(v)]) {
                on = false;
                break;
            }
        }
        if (on) {
            value += c;
        }
    }
    return value;
}

PseudoBoolean& PseudoBoolean::operator+=(const PseudoBoolean& other) {
    if (other.registry_.size() > registry_.size()) {
        registry_ = other.registry_;
    }
    constant_ += other.constant_;
    for (const auto& [key, c] : other.terms_) {
        add_term(key, c);
    }
    return *this;
}

PseudoBoolean& PseudoBoolean::operator*=(double factor) {
    constant_ *= factor;
    if (factor == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, c] : terms_) {
        c *= factor;
    }
    return *this;
}

PseudoBoolean operator*(const PseudoBoolean& a, const PseudoBoolean& b) {
    PseudoBoolean out(a.registry_.size() >= b.registry_.size() ? a.registry_ : b.registry_);
    out.constant_ = a.constant_ * b.constant_;
    for (const auto& [ka, ca] : a.terms_) {
        out.add_term(ka, ca * b.constant_);
    }
    for (const auto& [kb, cb] : b.terms_) {
        out.add_term(kb, cb * a.constant_);
    }
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            Monomial key = ka;
            key.insert(key.end(), kb.begin(), kb.end());
            out.add_term(std::move(key), ca * cb);
        }
    }
    return out;
}

void PenaltyParams::validate() const {
    if (!(lambda_path > 0.0) || !(lambda_fault_cb > 0.0) || !(lambda_fault_sensor > 0.0)) {
        throw InvalidArgument("penalty weights must be positive");
    }
    if (lambda_ancilla && !(*lambda_ancilla > 0.0)) {
        throw InvalidArgument("lambda_ancilla must be positive");
    }
    if (!(lambda_path > std::max(lambda_fault_cb, lambda_fault_sensor))) {
        throw InvalidArgument("lambda_path must exceed both fault penalties");
    }
}

PseudoBoolean consistency_term(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params) {
    check_observation(net, obs);
    VariableRegistry reg(net.cb_count(), net.sensor_count());
    PseudoBoolean out(reg);
    for (int s = 1; s <= net.sensor_count(); ++s) {
        const int y = reg.sensor_var(s);
        Monomial full{y};
        for (int cb : net.path(s)) {
            full.push_back(reg.cb_var(cb));
        }
        // g = l + f - 2fl: HIGH gives y(1 - f), LOW gives y f.
        if (obs.high(s)) {
            out.add_term({y}, params.lambda_path);
            out.add_term(std::move(full), -params.lambda_path);
        } else {
            out.add_term(std::move(full), params.lambda_path);
        }
    }
    return out;
}

PseudoBoolean fault_count_term(const PowerNetwork& net, const PenaltyParams& params) {
    VariableRegistry reg(net.cb_count(), net.sensor_count());
    PseudoBoolean out(reg);
    for (int cb = 1; cb <= net.cb_count(); ++cb) {
        out.add_constant(params.lambda_fault_cb);
        out.add_term({reg.cb_var(cb)}, -params.lambda_fault_cb);
    }
    for (int s = 1; s <= net.sensor_count(); ++s) {
        out.add_constant(params.lambda_fault_sensor);
        out.add_term({reg.sensor_var(s)}, -params.lambda_fault_sensor);
    }
    return out;
}

PseudoBoolean build_problem(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params) {
    params.validate();
    return fault_count_term(net, params) + consistency_term(net, obs, params);
}

double evaluate(const PseudoBoolean& poly, std::span<const std::uint8_t> assignment) {
    return poly.evaluate(assignment);
}

bool is_consistent(const PowerNetwork& net, const Observation& obs, std::span<const std::uint8_t> assignment) {
    check_observation(net, obs);
    const std::size_t needed = static_cast<std::size_t>(net.cb_count() + net.sensor_count());
    if (assignment.size() < needed) {
        throw InvalidArgument("assignment shorter than the number of components");
    }
    std::vector<std::uint8_t> health(assignment.begin(), assignment.begin() + net.cb_count());
    for (int s = 1; s <= net.sensor_count(); ++s) {
        const bool healthy = assignment[static_cast<std::size_t>(net.cb_count() + s - 1)] != 0;
        if (healthy && powered(net, s, health) != obs.high(s)) {
            return false;
        }
    }
    return true;
}

FaultSet faults_of(const PowerNetwork& net, std::span<const std::uint8_t> assignment) {
    const std::size_t needed = static_cast<std::size_t>(net.cb_count() + net.sensor_count());
    if (assignment.size() < needed) {
        throw InvalidArgument("assignment shorter than the number of components");
    }
    FaultSet f;
    for (int cb = 1; cb <= net.cb_count(); ++cb) {
        if (!assignment[static_cast<std::size_t>(cb) - 1]) {
            f.cbs.insert(cb);
        }
    }
    for (int s = 1; s <= net.sensor_count(); ++s) {
        if (!assignment[static_cast<std::size_t>(net.cb_count() + s - 1)]) {
            f.sensors.insert(s);
        }
    }
    return f;
}

std::vector<std::uint8_t> assignment_of(const PowerNetwork& net, const FaultSet& faults) {
    faults.validate(net);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(net.cb_count() + net.sensor_count()), 1);
    for (int cb : faults.cbs) {
        bits[static_cast<std::size_t>(cb) - 1] = 0;
    }
    for (int s : faults.sensors) {
        bits[static_cast<std::size_t>(net.cb_count() + s - 1)] = 0;
    }
    return bits;
}

}  // namespace qdiag
