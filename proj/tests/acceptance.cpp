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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   acceptance <qdiag executable> <data dir> [criterion ...]

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qdiag/embed.hpp"
#include "qdiag/error.hpp"
#include "qdiag/formats.hpp"
#include "qdiag/quadratizer.hpp"
#include "qdiag/solvers.hpp"
#include "qdiag/spinmodels.hpp"
#include "qdiag/stats.hpp"

using namespace qdiag;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string cli_path;
std::string data_dir;

Outcome table_fault_counts() {
    Outcome o;
    double slowest = 0.0;
    for (const auto& row : testing::table_rows()) {
        auto net = PowerNetwork::build_tree(row.arity, row.depth);
        auto obs = Observation::parse(row.readout);
        auto t0 = Clock::now();
        auto core = tree_dp_diagnose(net, obs);
        const double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        o.require(core.min_faults == row.faults, std::string(row.readout) + " gave " + std::to_string(core.min_faults));
        o.require(dt < 0.010, std::string(row.readout) + " took " + std::to_string(dt) + " s");
        o.detail << core.min_faults << ' ';
    }
    o.detail << "faults; slowest " << slowest * 1e3 << " ms";
    return o;
}

Outcome degeneracy() {
    Outcome o;
    auto net = testing::quaternary();
    auto obs = Observation::parse(testing::kSixFaultReadout);
    auto core = tree_dp_diagnose(net, obs);
    o.require(core.multiplicity == 64, "DP multiplicity " + std::to_string(core.multiplicity));
    o.require(enumerate_minimal_diagnoses(net, obs).size() == 64, "enumeration size");

    auto q = compile(net, obs, PenaltyParams{}).qubo;
    o.require(q.size() == 46, "n_l");
    AnnealConfig cfg;
    cfg.reads = 100000;
    cfg.seed = 2;
    auto t0 = Clock::now();
    auto samples = simulated_anneal(qubo_to_ising(q), cfg);
    const double dt = seconds_since(t0);
    auto report = build_report(net, obs, samples);
    std::size_t optimal = 0;
    for (const auto& c : report.candidates) {
        if (static_cast<int>(c.faults.size()) != core.min_faults) continue;
        o.require(is_consistent(net, obs, assignment_of(net, c.faults)), "inconsistent optimum");
        ++optimal;
    }
    o.require(optimal >= 30, "only " + std::to_string(optimal) + " distinct optima");
    o.detail << "DP multiplicity " << core.multiplicity << "; SA " << cfg.reads << " reads found " << optimal
             << " distinct consistent optimal diagnoses, p_s " << estimate_ps(samples, core.min_faults) << " in "
             << dt << " s";
    return o;
}

Outcome logical_counts() {
    Outcome o;
    for (const auto& row : testing::table_rows()) {
        auto net = PowerNetwork::build_tree(row.arity, row.depth);
        const int n = compile(net, Observation::parse(row.readout), PenaltyParams{}).qubo.size();
        const bool ok = row.bound_only ? n <= row.logical : n == row.logical;
        o.require(ok, std::string(row.readout) + " gave n_l " + std::to_string(n));
        o.detail << "n_l " << n << (row.bound_only ? " (<= " : " (= ") << row.logical << ") ";
    }
    return o;
}

Outcome ground_state_preservation() {
    Outcome o;
    auto net = testing::five_cb();
    auto obs = Observation::parse(testing::kFiveCbReadout);
    auto q = compile(net, obs, PenaltyParams{}).qubo;
    o.require(q.size() == 12, "n_l");
    auto t0 = Clock::now();
    auto bf = brute_force_minimize(q);
    const double dt = seconds_since(t0);
    std::set<FaultSet> projected;
    for (auto s : bf.minimizers) projected.insert(faults_of(net, bits_of_state(s, q.size())));
    auto oracle = enumerate_minimal_diagnoses(net, obs);
    o.require(std::abs(bf.min_energy - 2.0) <= 1e-9, "minimum " + std::to_string(bf.min_energy));
    o.require(projected == std::set<FaultSet>(oracle.begin(), oracle.end()), "minimizer projections differ from DP set");
    o.require(dt < 1.0, "took " + std::to_string(dt) + " s");
    o.detail << "4096 assignments, minimum " << bf.min_energy << " (offset " << q.offset() << "), "
             << bf.minimizers.size() << " minimizer(s) projecting to " << projected.begin()->to_string() << ", "
             << dt * 1e3 << " ms";
    return o;
}

Outcome transform_exactness() {
    Outcome o;
    std::mt19937_64 rng(5);
    double worst_transform = 0.0;
    for (const auto& row : testing::table_rows()) {
        auto net = PowerNetwork::build_tree(row.arity, row.depth);
        auto q = compile(net, Observation::parse(row.readout), PenaltyParams{}).qubo;
        auto m = qubo_to_ising(q);
        for (int t = 0; t < 1000; ++t) {
            auto b = testing::random_bits(q.size(), rng);
            worst_transform = std::max(worst_transform, std::abs(q.energy(b) - ising_energy(m, spins_from_bits(b))));
        }
    }
    double worst_gauge = 0.0;
    std::uniform_int_distribution<int> size(1, 50);
    for (int t = 0; t < 1000; ++t) {
        const int n = size(rng);
        auto m = testing::random_ising(n, 0.3, rng);
        auto g = Gauge::random(n, rng());
        auto s = testing::random_spins(n, rng);
        SpinVector as(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) as[i] = static_cast<Spin>(s[i] * g.signs[i]);
        worst_gauge = std::max(worst_gauge, std::abs(ising_energy(apply_gauge(m, g), as) - ising_energy(m, s)));
    }
    o.require(worst_transform <= 1e-9, "transform error");
    o.require(worst_gauge <= 1e-12, "gauge error");
    o.detail << "max |E_QUBO - E_Ising| " << worst_transform << " over " << testing::table_rows().size()
             << " x 1000; max gauge error " << worst_gauge << " over 1000 triples";
    return o;
}

Outcome embedding_validity() {
    Outcome o;
    auto net = testing::quaternary();
    auto logical = qubo_to_ising(compile(net, Observation::parse(testing::kSixFaultReadout), PenaltyParams{}).qubo);
    auto hw = build_chimera(8, 8, 4, {3, 100, 257});
    o.require(hw.usable_count() == 509, "usable qubits");
    const auto g = LogicalGraph::from_ising(logical);
    EmbedOptions options;
    options.max_restarts = 64;
    auto t0 = Clock::now();
    Embedding e;
    try {
        e = find_embedding(g, hw, 1, options);
    } catch (const EmbeddingNotFound& err) {
        o.require(false, err.what());
        return o;
    }
    const double dt = seconds_since(t0);
    auto check = check_embedding(e, g, hw);
    o.require(check.ok, check.reason);
    o.require(e.physical_qubit_count() <= 122, "n_p " + std::to_string(e.physical_qubit_count()));

    auto em = embed_ising(logical, e, hw);
    std::mt19937_64 rng(9);
    double worst = 0.0;
    std::vector<SpinVector> phys;
    std::vector<SpinVector> truth;
    for (int t = 0; t < 100; ++t) {
        auto s = testing::random_spins(logical.size(), rng);
        SpinVector p(static_cast<std::size_t>(hw.num_qubits()), 1);
        for (std::size_t u = 0; u < e.chains.size(); ++u) {
            for (int qb : e.chains[u]) p[static_cast<std::size_t>(qb)] = s[u];
        }
        const double expect = em.scale * (ising_energy(logical, s) + em.chain_offset());
        worst = std::max(worst, std::abs(ising_energy(em.physical, p) - expect));
        phys.push_back(std::move(p));
        truth.push_back(std::move(s));
    }
    auto decoded = decode_samples(phys, e, 0);
    bool decoded_ok = true;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        decoded_ok = decoded_ok && decoded[t].spins == truth[t] && decoded[t].broken_fraction == 0.0;
    }
    o.require(worst <= 1e-9, "decode identity error " + std::to_string(worst));
    o.require(decoded_ok, "decoded spins differ");
    o.detail << "n_l " << g.n << " -> n_p " << e.physical_qubit_count() << " (limit 122), max chain "
             << e.max_chain_length() << ", " << dt << " s; decode identity max error " << worst << " on 100 states";
    return o;
}

Outcome statistics() {
    Outcome o;
    auto r1 = repetitions(33.0 / 100000.0, 0.99);
    auto r2 = repetitions(145.0 / 100000.0, 0.99);
    const double t1 = time_to_solution(13953, 20e-6);
    const double t2 = time_to_solution(9227, 20e-6);
    auto four = [](double v) {
        std::ostringstream s;
        s.precision(4);
        s << v;
        return s.str();
    };
    o.require(r1 == 13953u, "R(33)");
    o.require(r2 == 3174u, "R(145)");
    o.require(four(t1) == "0.2791", "t_QA(13953) " + four(t1));
    o.require(four(t2) == "0.1845", "t_QA(9227) " + four(t2));
    o.detail << "R " << r1.value_or(0) << ", " << r2.value_or(0) << "; t_QA " << four(t1) << " s, " << four(t2)
             << " s";
    return o;
}

Outcome property_suites() {
    Outcome o;
    // Oracle agreement on random small trees.
    const std::vector<std::pair<int, int>> shapes = {{2, 1}, {5, 1}, {2, 2}, {3, 2}, {4, 2},
                                                     {2, 3}, {5, 2}, {6, 2}, {7, 2}, {8, 2}};
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
    int agreed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto [k, d] = shapes[pick(rng)];
        auto net = PowerNetwork::build_tree(k, d);
        auto obs = Observation(testing::random_bits(net.sensor_count(), rng));
        auto core = tree_dp_diagnose(net, obs);
        auto truth = testing::enumerate_consistent(net, obs);
        if (core.min_faults == truth.min_faults && core.multiplicity == truth.minimal.size()) ++agreed;
    }
    o.require(agreed == 200, std::to_string(200 - agreed) + " oracle disagreements");

    // Gadget soundness and penalty dominance on the 5-CB instance.
    auto net = testing::five_cb();
    auto obs = Observation::parse(testing::kFiveCbReadout);
    auto c = compile(net, obs, PenaltyParams{});
    const int n_a = c.plan.ancilla_count();
    int unsound = 0;
    double consistent_min = std::numeric_limits<double>::infinity();
    double inconsistent_min = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < 512; ++s) {
        auto xy = bits_of_state(s, 9);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t a = 0; a < (1u << n_a); ++a) {
            auto full = xy;
            for (int k = 0; k < n_a; ++k) full.push_back(static_cast<std::uint8_t>((a >> k) & 1u));
            best = std::min(best, evaluate(c.reduced, full));
        }
        if (std::abs(best - evaluate(c.substituted, xy)) > 1e-9) ++unsound;
        const double h = evaluate(c.problem, xy);
        if (is_consistent(net, obs, xy)) {
            consistent_min = std::min(consistent_min, h);
        } else {
            inconsistent_min = std::min(inconsistent_min, h);
        }
    }
    o.require(unsound == 0, std::to_string(unsound) + " unsound gadget assignments");
    o.require(inconsistent_min > consistent_min, "penalty dominance");
    o.detail << "DP vs brute force " << agreed << "/200; gadget soundness over 512 x " << (1u << n_a)
             << " assignments; inconsistent min " << inconsistent_min << " > consistent min " << consistent_min;
    return o;
}

Outcome end_to_end() {
    Outcome o;
    if (cli_path.empty()) {
        o.require(false, "no qdiag executable given");
        return o;
    }
    const std::string cmd = "'" + cli_path + "' pipeline '" + data_dir + "/six_fault.txt' --broken '" + data_dir +
                            "/broken_509.txt' 2>&1";
    auto t0 = Clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        o.require(false, "cannot start pipeline");
        return o;
    }
    std::string output;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    const int status = pclose(pipe);
    const double dt = seconds_since(t0);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.require(code == 0, "exit code " + std::to_string(code) + "\n" + output);
    o.require(output.find("verified against oracle: min faults 6") != std::string::npos, "no oracle verification line");
    o.require(output.find("sampled min faults: 6") != std::string::npos, "sampled minimum is not 6");
    o.require(dt < 60.0, "took " + std::to_string(dt) + " s");
    o.detail << "exit " << code << ", min faults 6 verified, " << dt << " s";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc >= 3) {
        cli_path = argv[1];
        data_dir = argv[2];
    }
    std::set<int> only;
    for (int i = 3; i < argc; ++i) only.insert(std::stoi(argv[i]));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"minimal fault counts", table_fault_counts},
        {"six-fault degeneracy", degeneracy},
        {"logical qubit counts", logical_counts},
        {"ground-state preservation", ground_state_preservation},
        {"transform exactness", transform_exactness},
        {"embedding validity", embedding_validity},
        {"statistics reproduction", statistics},
        {"property suites", property_suites},
        {"end-to-end pipeline", end_to_end},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first
                  << "): " << o.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
