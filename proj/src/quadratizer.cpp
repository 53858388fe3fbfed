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

#include "qdiag/quadratizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "qdiag/error.hpp"

namespace qdiag {

void Qubo::add(int i, int j, double coefficient) {
    if (i < 0 || j < 0 || i >= size() || j >= size()) {
        throw InvalidArgument("QUBO index out of range");
    }
    if (coefficient == 0.0) {
        return;
    }
    if (i > j) {
        std::swap(i, j);
    }
    auto [it, inserted] = coefficients_.try_emplace({i, j}, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (std::abs(it->second) <= 1e-12) {
            coefficients_.erase(it);
        }
    }
}

double Qubo::coefficient(int i, int j) const {
    if (i > j) {
        std::swap(i, j);
    }
    auto it = coefficients_.find({i, j});
    return it == coefficients_.end() ? 0.0 : it->second;
}

double Qubo::energy(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != size()) {
        throw InvalidArgument("QUBO assignment has " + std::to_string(bits.size()) + " entries, expected " +
                              std::to_string(size()));
    }
    double e = offset_;
    for (const auto& [ij, c] : coefficients_) {
        if (bits[static_cast<std::size_t>(ij.first)] && bits[static_cast<std::size_t>(ij.second)]) {
            e += c;
        }
    }
    return e;
}

namespace {

Monomial path_monomial(const VariableRegistry& reg, const PowerNetwork& net, int sensor) {
    Monomial key{reg.sensor_var(sensor)};
    for (int cb : net.path(sensor)) {
        key.push_back(reg.cb_var(cb));
    }
    return canonical_monomial(std::move(key));
}

long long int_pow_capped(long long base, int exp, long long cap) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r >= cap) {
            return cap;
        }
    }
    return r;
}

}  // namespace

PseudoBoolean substitute_high_readout(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs) {
    check_observation(net, obs);
    PseudoBoolean out = poly;
    const VariableRegistry& reg = poly.registry();
    const double depth = net.depth();
    for (int s = 1; s <= net.sensor_count(); ++s) {
        if (!obs.high(s)) {
            continue;
        }
        // The path product appears as -lambda * y * prod(x).
        const double lambda = -out.take_term(path_monomial(reg, net, s));
        if (lambda == 0.0) {
            continue;
        }
        const int y = reg.sensor_var(s);
        // lambda*y is already present from y(1 - f); top it up to lambda*D*y.
        out.add_term({y}, lambda * (depth - 1.0));
        for (int cb : net.path(s)) {
            out.add_term({y, reg.cb_var(cb)}, -lambda);
        }
    }
    return out;
}

PseudoBoolean substitute_low_readout(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs) {
    check_observation(net, obs);
    PseudoBoolean out = poly;
    const VariableRegistry& reg = poly.registry();
    const double shift = 1.0 - net.depth();
    for (int s = 1; s <= net.sensor_count(); ++s) {
        if (obs.high(s)) {
            continue;
        }
        const double lambda = out.take_term(path_monomial(reg, net, s));
        if (lambda == 0.0) {
            continue;
        }
        const int y = reg.sensor_var(s);
        const std::vector<int> path = net.path(s);
        // y (shift + sum x)^2 with x^2 = x.
        out.add_term({y}, lambda * shift * shift);
        for (std::size_t a = 0; a < path.size(); ++a) {
            const int xa = reg.cb_var(path[a]);
            out.add_term({y, xa}, lambda * (1.0 + 2.0 * shift));
            for (std::size_t b = a + 1; b < path.size(); ++b) {
                out.add_term({y, xa, reg.cb_var(path[b])}, 2.0 * lambda);
            }
        }
    }
    return out;
}

ReductionPlan plan_reduction(const PseudoBoolean& poly, const PowerNetwork& net, const Observation& obs) {
    check_observation(net, obs);
    const VariableRegistry& reg = poly.registry();

    // Cubic terms grouped by their deeper CB.
    std::map<int, std::vector<CubicTerm>> by_deep_cb;
    for (const auto& [key, c] : poly.terms()) {
        if (key.size() < 3) {
            continue;
        }
        if (key.size() > 3) {
            throw InvalidArgument("plan_reduction expects cubic terms only; found degree " +
                                  std::to_string(key.size()));
        }
        int sensor_var = -1;
        std::vector<int> cb_vars;
        for (int v : key) {
            switch (reg.role(v)) {
                case VarRole::Sensor:
                    sensor_var = v;
                    break;
                case VarRole::Cb:
                    cb_vars.push_back(v);
                    break;
                default:
                    throw InvalidArgument("cubic term over unexpected variable " + reg.label(v));
            }
        }
        if (sensor_var < 0 || cb_vars.size() != 2) {
            throw InvalidArgument("cubic terms must have the form y x_n x_m");
        }
        const int cb0 = reg.local_index(cb_vars[0]);
        const int cb1 = reg.local_index(cb_vars[1]);
        const int l0 = net.level(cb0);
        const int l1 = net.level(cb1);
        if (l0 == l1) {
            throw InvalidArgument("cubic term pairs two CBs on the same level");
        }
        const bool first_deeper = l0 > l1;
        CubicTerm t{sensor_var, first_deeper ? cb_vars[0] : cb_vars[1], first_deeper ? cb_vars[1] : cb_vars[0], c};
        by_deep_cb[first_deeper ? cb0 : cb1].push_back(t);
    }

    const int base = reg.size();
    ReductionPlan plan;
    // (sensor var, -level) -> terms collapsed by the private y x substitution.
    std::map<std::pair<int, int>, std::vector<CubicTerm>> sensor_groups;
    std::map<std::pair<int, int>, int> sensor_group_cb;

    for (auto& [cb, terms] : by_deep_cb) {
        const int d = net.level(cb);
        std::set<int> sensors;
        std::set<int> partners;
        for (const auto& t : terms) {
            sensors.insert(t.sensor_var);
            partners.insert(t.shallow_var);
        }
        const long long room = int_pow_capped(net.arity(), net.depth() - d, 1LL << 40);
        const bool pair = static_cast<long long>(sensors.size()) > d - 1 && room >= d - 1;
        if (pair) {
            for (int partner : partners) {
                Substitution sub{Substitution::Kind::Pair, reg.cb_var(cb), partner, -1, {}};
                for (const auto& t : terms) {
                    if (t.shallow_var == partner) {
                        sub.collapsed.push_back(t);
                    }
                }
                plan.substitutions.push_back(std::move(sub));
            }
        } else {
            for (const auto& t : terms) {
                auto key = std::make_pair(t.sensor_var, -d);
                sensor_groups[key].push_back(t);
                sensor_group_cb[key] = reg.cb_var(cb);
            }
        }
    }
    for (auto& [key, terms] : sensor_groups) {
        plan.substitutions.push_back(
            Substitution{Substitution::Kind::Sensor, key.first, sensor_group_cb[key], -1, std::move(terms)});
    }
    for (std::size_t k = 0; k < plan.substitutions.size(); ++k) {
        plan.substitutions[k].ancilla_var = base + static_cast<int>(k);
    }
    return plan;
}

PseudoBoolean ancilla_gadget(int u, int v, int a, double weight, const VariableRegistry& registry) {
    if (!(weight > 0.0)) {
        throw InvalidArgument("ancilla gadget weight must be positive");
    }
    if (u == v || u == a || v == a) {
        throw InvalidArgument("ancilla gadget needs three distinct variables");
    }
    PseudoBoolean g(registry);
    g.add_term({u, v}, weight);
    g.add_term({u, a}, -2.0 * weight);
    g.add_term({v, a}, -2.0 * weight);
    g.add_term({a}, 3.0 * weight);
    return g;
}

PseudoBoolean apply_reduction(const PseudoBoolean& poly, const ReductionPlan& plan,
                              std::optional<double> uniform_weight) {
    const VariableRegistry& reg = poly.registry();
    const VariableRegistry extended = reg.with_ancillas(reg.ancilla_count() + plan.ancilla_count());
    PseudoBoolean out = poly;
    out.set_registry(extended);

    for (const auto& sub : plan.substitutions) {
        for (const auto& t : sub.collapsed) {
            const double c = out.take_term(canonical_monomial({t.sensor_var, t.deep_var, t.shallow_var}));
            if (c == 0.0) {
                throw InvalidArgument("cubic term collapsed twice or missing");
            }
            if (sub.kind == Substitution::Kind::Pair) {
                out.add_term({t.sensor_var, sub.ancilla_var}, c);
            } else {
                out.add_term({sub.ancilla_var, t.shallow_var}, c);
            }
        }
    }

    std::vector<double> weight(plan.substitutions.size(), 1.0);
    if (uniform_weight) {
        std::fill(weight.begin(), weight.end(), *uniform_weight);
    } else {
        const int base = plan.substitutions.empty() ? 0 : plan.substitutions.front().ancilla_var;
        for (const auto& [key, c] : out.terms()) {
            for (int v : key) {
                if (v >= base && v < base + plan.ancilla_count()) {
                    weight[static_cast<std::size_t>(v - base)] += std::abs(c);
                }
            }
        }
    }
    for (std::size_t k = 0; k < plan.substitutions.size(); ++k) {
        const auto& sub = plan.substitutions[k];
        out += ancilla_gadget(sub.first, sub.second, sub.ancilla_var, weight[k], extended);
    }
    if (out.degree() > 2) {
        throw InvalidArgument("reduction plan left terms of degree above two");
    }
    return out;
}

Qubo to_qubo(const PseudoBoolean& poly) {
    Qubo q(poly.registry());
    q.add_offset(poly.constant());
    for (const auto& [key, c] : poly.terms()) {
        if (key.size() == 1) {
            q.add(key[0], key[0], c);
        } else if (key.size() == 2) {
            q.add(key[0], key[1], c);
        } else {
            throw InvalidArgument("cannot fold a term of degree " + std::to_string(key.size()) + " into a QUBO");
        }
    }
    return q;
}

Compilation compile(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params) {
    Compilation c;
    c.problem = build_problem(net, obs, params);
    c.substituted = substitute_low_readout(substitute_high_readout(c.problem, net, obs), net, obs);
    c.plan = plan_reduction(c.substituted, net, obs);
    c.reduced = apply_reduction(c.substituted, c.plan, params.lambda_ancilla);
    c.qubo = to_qubo(c.reduced);
    return c;
}

Qubo quadratize(const PseudoBoolean& problem, const PowerNetwork& net, const Observation& obs,
                const PenaltyParams& params) {
    params.validate();
    PseudoBoolean substituted = substitute_low_readout(substitute_high_readout(problem, net, obs), net, obs);
    ReductionPlan plan = plan_reduction(substituted, net, obs);
    return to_qubo(apply_reduction(substituted, plan, params.lambda_ancilla));
}

}  // namespace qdiag
