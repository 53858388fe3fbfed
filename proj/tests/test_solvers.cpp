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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "qdiag/error.hpp"
#include "qdiag/solvers.hpp"

using namespace qdiag;

namespace {

IsingModel ferromagnet() {
    IsingModel m(2);
    m.set_J(0, 1, -1.0);
    return m;
}

// Shapes with n_CB + n_sensor <= 20.
const std::vector<std::pair<int, int>> kSmallShapes = {
    {2, 1}, {5, 1}, {2, 2}, {3, 2}, {4, 2}, {2, 3}, {5, 2}, {6, 2}, {7, 2}, {8, 2},
};

}  // namespace

TEST_CASE("brute_force_minimize examples") {
    auto fm = brute_force_minimize(ferromagnet());
    CHECK(fm.min_energy == -1.0);
    CHECK(fm.minimizers == std::vector<std::uint64_t>{0b00, 0b11});

    auto net = testing::five_cb();
    auto q = compile(net, Observation::parse(testing::kFiveCbReadout), {}).qubo;
    REQUIRE(q.size() == 12);
    auto bf = brute_force_minimize(q);
    CHECK(bf.min_energy == doctest::Approx(2.0));
    REQUIRE(bf.minimizers.size() == 1);
    CHECK(faults_of(net, bits_of_state(bf.minimizers[0], 12)) == FaultSet{{1}, {4}});

    IsingModel zero(3);
    zero.set_offset(1.5);
    auto z = brute_force_minimize(zero);
    CHECK(z.min_energy == 1.5);
    CHECK(z.minimizers.size() == 8);

    CHECK_THROWS_AS(brute_force_minimize(IsingModel(kBruteForceLimit + 1)), InvalidArgument);
    CHECK_THROWS_AS(brute_force_minimize(Qubo(VariableRegistry::generic(kBruteForceLimit + 1))), InvalidArgument);
}

TEST_CASE("tree_dp_diagnose examples") {
    auto six = tree_dp_diagnose(testing::quaternary(), Observation::parse(testing::kSixFaultReadout));
    CHECK(six.min_faults == 6);
    CHECK(six.multiplicity == 64);
    CHECK(six.witness.size() == 6);

    auto five = tree_dp_diagnose(testing::five_cb(), Observation::parse(testing::kFiveCbReadout));
    CHECK(five.min_faults == 2);
    CHECK(five.multiplicity == 1);
    CHECK(five.witness == FaultSet{{1}, {4}});

    for (auto [k, d] : {std::pair{2, 5}, {4, 3}, {4, 4}}) {
        auto net = PowerNetwork::build_tree(k, d);
        auto healthy = tree_dp_diagnose(net, Observation::all_high(net));
        CHECK(healthy.min_faults == 0);
        CHECK(healthy.multiplicity == 1);
        CHECK(healthy.witness.empty());
    }
}

TEST_CASE("minimal fault counts of the reference readouts") {
    for (const auto& row : testing::table_rows()) {
        auto net = PowerNetwork::build_tree(row.arity, row.depth);
        auto obs = Observation::parse(row.readout);
        auto core = tree_dp_diagnose(net, obs);
        CHECK(core.min_faults == row.faults);
        CHECK(is_consistent(net, obs, assignment_of(net, core.witness)));
        CHECK(static_cast<int>(core.witness.size()) == row.faults);
    }
}

TEST_CASE("enumerate_minimal_diagnoses") {
    auto net = testing::quaternary();
    auto obs = Observation::parse(testing::kSixFaultReadout);
    auto all = enumerate_minimal_diagnoses(net, obs);
    REQUIRE(all.size() == 64);
    CHECK(std::is_sorted(all.begin(), all.end(), candidate_less));
    CHECK(std::set<FaultSet>(all.begin(), all.end()).size() == 64);
    for (const auto& f : all) {
        CHECK(f.size() == 6);
        CHECK(is_consistent(net, obs, assignment_of(net, f)));
    }
    CHECK(enumerate_minimal_diagnoses(net, obs, 5).size() == 5);
}

TEST_CASE("candidate_less ordering") {
    CHECK(candidate_less(FaultSet{{5}, {}}, FaultSet{{1}, {1}}));
    CHECK(candidate_less(FaultSet{{1}, {4}}, FaultSet{{2}, {1}}));
    CHECK(candidate_less(FaultSet{{3}, {}}, FaultSet{{}, {1}}));
    CHECK_FALSE(candidate_less(FaultSet{{1}, {}}, FaultSet{{1}, {}}));
}

TEST_CASE("DP agrees with brute force on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, kSmallShapes.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        auto [k, d] = kSmallShapes[pick(rng)];
        auto net = PowerNetwork::build_tree(k, d);
        REQUIRE(net.cb_count() + net.sensor_count() <= 20);
        Observation obs;
        if (coin(rng)) {
            obs = Observation(testing::random_bits(net.sensor_count(), rng));
        } else {
            // Fault-generated readouts have realistic structure.
            FaultSet f;
            std::uniform_int_distribution<int> cb(1, net.cb_count());
            std::uniform_int_distribution<int> sensor(1, net.sensor_count());
            for (int i = 0; i < 2; ++i) {
                if (coin(rng)) f.cbs.insert(cb(rng));
                if (coin(rng)) f.sensors.insert(sensor(rng));
            }
            obs = simulate_readout(net, f);
        }
        CAPTURE(k);
        CAPTURE(d);
        CAPTURE(obs.to_string(k));

        auto core = tree_dp_diagnose(net, obs);
        auto truth = testing::enumerate_consistent(net, obs);
        CHECK(core.min_faults == truth.min_faults);
        CHECK(core.multiplicity == truth.minimal.size());
        auto listed = enumerate_minimal_diagnoses(net, obs);
        CHECK(std::set<FaultSet>(listed.begin(), listed.end()) == truth.minimal);

        // H_problem reaches exactly the DP count.
        auto h = build_problem(net, obs, PenaltyParams{});
        const int n = h.registry().size();
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) best = std::min(best, evaluate(h, bits_of_state(s, n)));
        CHECK(best == doctest::Approx(core.min_faults));
    }
}

TEST_CASE("DP multiplicity saturates rather than overflowing") {
    auto net = PowerNetwork::build_tree(2, 12);
    std::vector<std::uint8_t> alternating(static_cast<std::size_t>(net.sensor_count()));
    for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2;
    auto core = tree_dp_diagnose(net, Observation(alternating));
    CHECK(core.min_faults == net.sensor_count() / 2);
    CHECK(core.multiplicity == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("simulated_anneal examples") {
    auto ground_hits = [](const SampleSet& ss) {
        std::uint64_t hits = 0;
        for (const auto& r : ss.records) {
            if (r.energy == -1.0) hits += r.occurrences;
        }
        return hits;
    };
    AnnealConfig cfg;
    cfg.reads = 100;
    cfg.sweeps = 50;
    cfg.seed = 4;
    cfg.beta_end = 8.0;
    auto fm = simulated_anneal(ferromagnet(), cfg);
    CHECK(fm.total_reads == 100);
    CHECK(ground_hits(fm) >= 99);
    CHECK(fm.info.seed == 4);
    CHECK(fm.info.sweeps == 50);
    CHECK(fm.info.beta_end == 8.0);

    // The default end point 2 max|J| = 2 leaves the pair thermally excited
    // with probability e^-4 / (1 + e^-4) ~ 1.8% at equilibrium.
    cfg.beta_end.reset();
    cfg.reads = 4000;
    auto warm = simulated_anneal(ferromagnet(), cfg);
    CHECK(warm.info.beta_end == doctest::Approx(2.0));
    CHECK(static_cast<double>(ground_hits(warm)) / 4000.0 == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(0.01));

    auto net = testing::five_cb();
    auto q = compile(net, Observation::parse(testing::kFiveCbReadout), {}).qubo;
    cfg.reads = 1000;
    cfg.sweeps = 1000;
    auto five = simulated_anneal(qubo_to_ising(q), cfg);
    CHECK(five.lowest_energy() == doctest::Approx(brute_force_minimize(q).min_energy));

    CHECK_THROWS_AS(simulated_anneal(ferromagnet(), AnnealConfig{0, 10, 0.1, {}, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(simulated_anneal(ferromagnet(), AnnealConfig{10, 0, 0.1, {}, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(simulated_anneal(ferromagnet(), AnnealConfig{10, 10, 0.0, {}, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(simulated_anneal(ferromagnet(), AnnealConfig{10, 10, 0.1, -1.0, 1, 1}), InvalidArgument);
}

TEST_CASE("annealing the 6-fault instance shows the fault tiers") {
    auto net = testing::quaternary();
    auto obs = Observation::parse(testing::kSixFaultReadout);
    auto q = compile(net, obs, {}).qubo;
    auto m = qubo_to_ising(q);
    AnnealConfig cfg;
    cfg.reads = 2000;
    cfg.seed = 12;
    auto ss = simulated_anneal(m, cfg);

    std::set<long> levels;
    std::uint64_t total = 0;
    for (const auto& r : ss.records) {
        levels.insert(std::lround(r.energy));
        total += r.occurrences;
        // Stored energies re-evaluate exactly.
        CHECK(std::abs(ising_energy(m, r.spins) - r.energy) <= 1e-9);
    }
    CHECK(total == ss.total_reads);
    CHECK(levels.count(6) == 1);
    CHECK(levels.count(7) == 1);
    CHECK(levels.count(8) == 1);
    CHECK(*levels.begin() == 6);
    CHECK(std::is_sorted(ss.records.begin(), ss.records.end(),
                         [](const SampleRecord& a, const SampleRecord& b) { return a.energy < b.energy; }));
}

TEST_CASE("annealing is independent of the thread count") {
    auto net = testing::quaternary();
    auto m = qubo_to_ising(compile(net, Observation::parse(testing::kSixFaultReadout), {}).qubo);
    AnnealConfig cfg;
    cfg.reads = 64;
    cfg.sweeps = 200;
    cfg.seed = 99;
    cfg.threads = 1;
    auto one = simulated_anneal(m, cfg);
    cfg.threads = 3;
    auto three = simulated_anneal(m, cfg);
    cfg.threads = 8;
    auto eight = simulated_anneal(m, cfg);
    CHECK(one == three);
    CHECK(one == eight);
    cfg.seed = 100;
    CHECK_FALSE(simulated_anneal(m, cfg) == one);
}

TEST_CASE("SampleSet::from_reads groups states") {
    auto m = ferromagnet();
    std::vector<SpinVector> reads = {{1, 1}, {-1, 1}, {1, 1}, {-1, -1}};
    auto ss = SampleSet::from_reads(reads, m);
    CHECK(ss.total_reads == 4);
    REQUIRE(ss.records.size() == 3);
    CHECK(ss.records.front().energy == -1.0);
    CHECK(ss.records.back().energy == 1.0);
    CHECK(ss.records.back().occurrences == 1);
    CHECK(ss.lowest_energy() == -1.0);
    CHECK_THROWS_AS(SampleSet{}.lowest_energy(), InvalidArgument);
}

TEST_CASE("diagnose examples") {
    AnnealConfig cfg;
    cfg.reads = 500;
    cfg.seed = 3;

    auto five = diagnose(testing::five_cb(), Observation::parse(testing::kFiveCbReadout), {}, cfg);
    REQUIRE_FALSE(five.candidates.empty());
    CHECK(five.candidates.front().faults == FaultSet{{1}, {4}});
    CHECK(five.sampled_min_faults == 2);
    CHECK(five.oracle_min_faults == 2);
    CHECK(five.agrees);

    auto net = testing::quaternary();
    auto healthy = diagnose(net, Observation::all_high(net), {}, cfg);
    REQUIRE_FALSE(healthy.candidates.empty());
    CHECK(healthy.candidates.front().faults.empty());
    CHECK(healthy.optimal_candidate_count() == 1);

    auto obs = Observation::parse(testing::kSixFaultReadout);
    cfg.reads = 3000;
    auto six = diagnose(net, obs, {}, cfg);
    CHECK(six.agrees);
    CHECK(six.oracle_multiplicity == 64);
    CHECK(six.optimal_candidate_count() >= 20);
    bool next_tier = false;
    for (std::size_t i = 0; i < six.candidates.size(); ++i) {
        const auto& c = six.candidates[i];
        CHECK(is_consistent(net, obs, assignment_of(net, c.faults)));
        if (i > 0) CHECK_FALSE(candidate_less(c.faults, six.candidates[i - 1].faults));
        if (c.faults.size() == 7) next_tier = true;
    }
    CHECK(next_tier);
}

TEST_CASE("report without consistent samples") {
    auto net = testing::five_cb();
    auto obs = Observation::parse(testing::kFiveCbReadout);
    auto m = qubo_to_ising(compile(net, obs, {}).qubo);
    // The all-healthy state contradicts three readouts.
    std::vector<SpinVector> reads(2, SpinVector(static_cast<std::size_t>(m.size()), 1));
    auto report = build_report(net, obs, SampleSet::from_reads(reads, m));
    CHECK(report.candidates.empty());
    CHECK_FALSE(report.sampled_min_faults.has_value());
    CHECK(report.inconsistent_reads == 2);
    CHECK_FALSE(report.agrees);
    CHECK(report.oracle_min_faults == 2);
}
