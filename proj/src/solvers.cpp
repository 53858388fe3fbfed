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

#include "qdiag/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "qdiag/error.hpp"
#include "qdiag/seed.hpp"

namespace qdiag {

SampleSet SampleSet::from_reads(std::span<const SpinVector> reads, const IsingModel& m, AnnealInfo info) {
    std::map<SpinVector, std::uint64_t> counts;
    for (const auto& s : reads) {
        ++counts[s];
    }
    SampleSet out;
    out.info = info;
    out.total_reads = reads.size();
    out.records.reserve(counts.size());
    for (auto& [s, c] : counts) {
        out.records.push_back({s, ising_energy(m, s), c});
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const SampleRecord& a, const SampleRecord& b) { return a.energy < b.energy; });
    return out;
}

double SampleSet::lowest_energy() const {
    if (records.empty()) {
        throw InvalidArgument("empty sample set");
    }
    return records.front().energy;
}

double default_beta_end(const IsingModel& m) {
    const double mag = std::max(m.max_abs_h(), m.max_abs_J());
    return mag > 0.0 ? 2.0 * mag : 1.0;
}

namespace {

// Compressed adjacency for the sweep loop.
struct SweepGraph {
    std::vector<int> offsets;
    std::vector<int> neighbors;
    std::vector<double> weights;
    std::vector<int> active;  // spins with a field or a coupling
};

SweepGraph make_sweep_graph(const IsingModel& m) {
    const std::size_t n = static_cast<std::size_t>(m.size());
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& [ij, c] : m.J()) {
        adj[static_cast<std::size_t>(ij.first)].emplace_back(ij.second, c);
        adj[static_cast<std::size_t>(ij.second)].emplace_back(ij.first, c);
    }
    SweepGraph g;
    g.offsets.resize(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.offsets[i + 1] = g.offsets[i] + static_cast<int>(adj[i].size());
        for (auto [j, c] : adj[i]) {
            g.neighbors.push_back(j);
            g.weights.push_back(c);
        }
        if (!adj[i].empty() || m.h()[i] != 0.0) {
            g.active.push_back(static_cast<int>(i));
        }
    }
    return g;
}

inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SpinVector anneal_once(const IsingModel& m, const SweepGraph& g, const std::vector<double>& betas,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = static_cast<std::size_t>(m.size());
    SpinVector s(n);
    for (auto& v : s) {
        v = (rng() >> 63) ? Spin{1} : Spin{-1};
    }
    std::vector<double> field(m.h());
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
            field[i] += g.weights[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(g.neighbors[static_cast<std::size_t>(k)])];
        }
    }
    for (double beta : betas) {
        for (int i : g.active) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const double delta = -2.0 * s[ui] * field[ui];
            if (delta > 0.0) {
                const double x = beta * delta;
                if (x > 40.0 || unit_uniform(rng) >= std::exp(-x)) {
                    continue;
                }
            }
            s[ui] = static_cast<Spin>(-s[ui]);
            const double twice = 2.0 * s[ui];
            for (int k = g.offsets[ui]; k < g.offsets[ui + 1]; ++k) {
                field[static_cast<std::size_t>(g.neighbors[static_cast<std::size_t>(k)])] +=
                    twice * g.weights[static_cast<std::size_t>(k)];
            }
        }
    }
    return s;
}

}  // namespace

SampleSet simulated_anneal(const IsingModel& m, const AnnealConfig& config) {
    if (config.reads < 1) {
        throw InvalidArgument("at least one read is required");
    }
    if (config.sweeps < 1) {
        throw InvalidArgument("at least one sweep is required");
    }
    const double beta_end = config.beta_end ? *config.beta_end : default_beta_end(m);
    if (!(config.beta_start > 0.0) || !(beta_end > 0.0) || !std::isfinite(config.beta_start) ||
        !std::isfinite(beta_end)) {
        throw InvalidArgument("inverse temperatures must be positive and finite");
    }
    std::vector<double> betas(static_cast<std::size_t>(config.sweeps));
    for (int t = 0; t < config.sweeps; ++t) {
        const double frac = config.sweeps == 1 ? 1.0 : static_cast<double>(t) / (config.sweeps - 1);
        betas[static_cast<std::size_t>(t)] = config.beta_start * std::pow(beta_end / config.beta_start, frac);
    }
    const SweepGraph g = make_sweep_graph(m);

    std::vector<SpinVector> reads(config.reads);
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.reads));
    auto work = [&](unsigned t) {
        for (std::uint64_t r = t; r < config.reads; r += threads) {
            reads[r] = anneal_once(m, g, betas, derive_seed(config.seed, "sa-read", r));
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
    }
    return SampleSet::from_reads(reads, m, AnnealInfo{config.seed, config.sweeps, config.beta_start, beta_end});
}

std::vector<std::uint8_t> bits_of_state(std::uint64_t state, int n) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((state >> i) & 1u);
    }
    return bits;
}

BruteForceResult brute_force_minimize(const Qubo& q) {
    const int n = q.size();
    if (n > kBruteForceLimit) {
        throw InvalidArgument("brute force limited to " + std::to_string(kBruteForceLimit) + " variables, got " +
                              std::to_string(n));
    }
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> linear(un, 0.0);
    std::vector<std::vector<std::pair<int, double>>> adj(un);
    for (const auto& [ij, c] : q.coefficients()) {
        if (ij.first == ij.second) {
            linear[static_cast<std::size_t>(ij.first)] += c;
        } else {
            adj[static_cast<std::size_t>(ij.first)].emplace_back(ij.second, c);
            adj[static_cast<std::size_t>(ij.second)].emplace_back(ij.first, c);
        }
    }
    // Gray-code walk with incremental energies; near-ties are re-evaluated
    // exactly at the end.
    constexpr double kSlack = 1e-6;
    std::vector<double> field(un, 0.0);
    std::uint64_t state = 0;
    double energy = q.offset();
    double best = energy;
    std::vector<std::uint64_t> near{0};
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int i = std::countr_zero(k);
        const std::size_t ui = static_cast<std::size_t>(i);
        const bool on = (state >> i) & 1u;
        const double sign = on ? -1.0 : 1.0;
        energy += sign * (linear[ui] + field[ui]);
        state ^= std::uint64_t{1} << i;
        for (auto [j, c] : adj[ui]) {
            field[static_cast<std::size_t>(j)] += sign * c;
        }
        if (energy < best - kSlack) {
            best = energy;
            near.assign(1, state);
        } else if (energy <= best + kSlack) {
            best = std::min(best, energy);
            near.push_back(state);
        }
    }
    BruteForceResult out;
    out.min_energy = std::numeric_limits<double>::infinity();
    std::vector<double> exact(near.size());
    for (std::size_t k = 0; k < near.size(); ++k) {
        exact[k] = q.energy(bits_of_state(near[k], n));
        out.min_energy = std::min(out.min_energy, exact[k]);
    }
    for (std::size_t k = 0; k < near.size(); ++k) {
        if (exact[k] <= out.min_energy + 1e-9) {
            out.minimizers.push_back(near[k]);
        }
    }
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

BruteForceResult brute_force_minimize(const IsingModel& m) {
    if (m.size() > kBruteForceLimit) {
        throw InvalidArgument("brute force limited to " + std::to_string(kBruteForceLimit) + " variables, got " +
                              std::to_string(m.size()));
    }
    BruteForceResult r = brute_force_minimize(ising_to_qubo(m));
    r.min_energy = std::numeric_limits<double>::infinity();
    for (auto st : r.minimizers) {
        r.min_energy = std::min(r.min_energy, ising_energy(m, spins_from_bits(bits_of_state(st, m.size()))));
    }
    return r;
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

struct DpTable {
    // Cost and count of minimal diagnoses of the subtree when current reaches
    // the CB; the "cut" alternative (this CB faulted) is folded in.
    std::vector<int> cost;
    std::vector<std::uint64_t> count;
    // Cost of the healthy alternative alone, for reconstruction.
    std::vector<int> healthy_cost;
    // HIGH sensors under each CB: what a cut above forces into faults.
    std::vector<int> high_below;
};

DpTable run_dp(const PowerNetwork& net, const Observation& obs) {
    check_observation(net, obs);
    const std::size_t n = static_cast<std::size_t>(net.cb_count());
    DpTable t{std::vector<int>(n + 1), std::vector<std::uint64_t>(n + 1), std::vector<int>(n + 1),
              std::vector<int>(n + 1)};
    for (int cb = net.cb_count(); cb >= 1; --cb) {
        const std::size_t u = static_cast<std::size_t>(cb);
        int healthy = 0;
        std::uint64_t healthy_count = 1;
        if (net.is_leaf(cb)) {
            const int s = net.sensor_of_leaf(cb);
            t.high_below[u] = obs.high(s) ? 1 : 0;
            // Powered leaf: a LOW readout needs its sensor faulted.
            healthy = obs.high(s) ? 0 : 1;
        } else {
            for (int c : net.children(cb)) {
                const std::size_t uc = static_cast<std::size_t>(c);
                t.high_below[u] += t.high_below[uc];
                healthy += t.cost[uc];
                healthy_count = sat_mul(healthy_count, t.count[uc]);
            }
        }
        const int cut = 1 + t.high_below[u];
        t.healthy_cost[u] = healthy;
        if (healthy < cut) {
            t.cost[u] = healthy;
            t.count[u] = healthy_count;
        } else if (cut < healthy) {
            t.cost[u] = cut;
            t.count[u] = 1;
        } else {
            t.cost[u] = healthy;
            t.count[u] = sat_add(healthy_count, 1);
        }
    }
    return t;
}

void add_cut(const PowerNetwork& net, const Observation& obs, int cb, FaultSet& f) {
    f.cbs.insert(cb);
    for (int s = net.first_sensor_under(cb); s <= net.last_sensor_under(cb); ++s) {
        if (obs.high(s)) {
            f.sensors.insert(s);
        }
    }
}

void enumerate(const PowerNetwork& net, const Observation& obs, const DpTable& t, const std::vector<int>& pending,
               FaultSet current, std::vector<FaultSet>& out, std::size_t limit) {
    if (out.size() >= limit) return;
    if (pending.empty()) {
        out.push_back(std::move(current));
        return;
    }
    std::vector<int> rest(pending.begin() + 1, pending.end());
    const int cb = pending.front();
    const std::size_t u = static_cast<std::size_t>(cb);
    if (t.healthy_cost[u] == t.cost[u]) {
        if (net.is_leaf(cb)) {
            FaultSet next = current;
            const int s = net.sensor_of_leaf(cb);
            if (!obs.high(s)) next.sensors.insert(s);
            enumerate(net, obs, t, rest, std::move(next), out, limit);
        } else {
            std::vector<int> expanded = net.children(cb);
            expanded.insert(expanded.end(), rest.begin(), rest.end());
            enumerate(net, obs, t, expanded, current, out, limit);
        }
    }
    if (1 + t.high_below[u] == t.cost[u]) {
        add_cut(net, obs, cb, current);
        enumerate(net, obs, t, rest, std::move(current), out, limit);
    }
}

}  // namespace

DiagnosisCore tree_dp_diagnose(const PowerNetwork& net, const Observation& obs) {
    const DpTable t = run_dp(net, obs);
    DiagnosisCore out;
    out.min_faults = t.cost[1];
    out.multiplicity = t.count[1];
    // Reconstruct one witness, preferring healthy CBs.
    std::vector<int> stack{1};
    while (!stack.empty()) {
        const int cb = stack.back();
        stack.pop_back();
        const std::size_t u = static_cast<std::size_t>(cb);
        if (t.healthy_cost[u] == t.cost[u]) {
            if (net.is_leaf(cb)) {
                const int s = net.sensor_of_leaf(cb);
                if (!obs.high(s)) out.witness.sensors.insert(s);
            } else {
                for (int c : net.children(cb)) stack.push_back(c);
            }
        } else {
            add_cut(net, obs, cb, out.witness);
        }
    }
    return out;
}

bool candidate_less(const FaultSet& a, const FaultSet& b) {
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    // CB indices precede sensor indices in variable order.
    std::vector<long long> ka;
    std::vector<long long> kb;
    constexpr long long kOffset = 1LL << 32;
    for (int c : a.cbs) ka.push_back(c);
    for (int s : a.sensors) ka.push_back(kOffset + s);
    for (int c : b.cbs) kb.push_back(c);
    for (int s : b.sensors) kb.push_back(kOffset + s);
    return ka < kb;
}

std::vector<FaultSet> enumerate_minimal_diagnoses(const PowerNetwork& net, const Observation& obs,
                                                  std::size_t limit) {
    const DpTable t = run_dp(net, obs);
    std::vector<FaultSet> out;
    enumerate(net, obs, t, {1}, FaultSet{}, out, limit);
    std::sort(out.begin(), out.end(), candidate_less);
    return out;
}

std::size_t DiagnosisReport::optimal_candidate_count() const {
    if (!sampled_min_faults) return 0;
    return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(), [&](const Candidate& c) {
        return static_cast<int>(c.faults.size()) == *sampled_min_faults;
    }));
}

DiagnosisReport build_report(const PowerNetwork& net, const Observation& obs, const SampleSet& samples) {
    const DiagnosisCore oracle = tree_dp_diagnose(net, obs);
    DiagnosisReport report;
    report.oracle_min_faults = oracle.min_faults;
    report.oracle_multiplicity = oracle.multiplicity;

    std::map<FaultSet, Candidate> seen;
    for (const auto& rec : samples.records) {
        const auto bits = bits_from_spins(rec.spins);
        if (!is_consistent(net, obs, bits)) {
            report.inconsistent_reads += rec.occurrences;
            continue;
        }
        FaultSet f = faults_of(net, bits);
        auto [it, inserted] = seen.try_emplace(f, Candidate{f, rec.energy, 0});
        it->second.occurrences += rec.occurrences;
        it->second.energy = std::min(it->second.energy, rec.energy);
    }
    for (auto& [f, c] : seen) {
        report.candidates.push_back(std::move(c));
    }
    std::sort(report.candidates.begin(), report.candidates.end(),
              [](const Candidate& a, const Candidate& b) { return candidate_less(a.faults, b.faults); });
    if (!report.candidates.empty()) {
        report.sampled_min_faults = static_cast<int>(report.candidates.front().faults.size());
    }
    report.agrees = report.sampled_min_faults && *report.sampled_min_faults == report.oracle_min_faults;
    return report;
}

DiagnosisReport diagnose(const PowerNetwork& net, const Observation& obs, const PenaltyParams& params,
                         const AnnealConfig& config) {
    const Compilation c = compile(net, obs, params);
    const IsingModel m = qubo_to_ising(c.qubo);
    return build_report(net, obs, simulated_anneal(m, config));
}

}  // namespace qdiag
