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

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "qdiag/error.hpp"
#include "qdiag/formats.hpp"

using namespace qdiag;

namespace {

Instance six_fault() {
    return Instance{testing::quaternary(), Observation::parse(testing::kSixFaultReadout), PenaltyParams{}};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("reals round trip bit for bit") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int t = 0; t < 1000; ++t) {
        const double v = u(rng) / 3.0;
        CHECK(parse_real(format_real(v)) == v);
    }
    CHECK(parse_real(format_real(0.1)) == 0.1);
    CHECK(parse_real(format_real(-0.0)) == 0.0);
    CHECK(parse_real("3") == 3.0);
    CHECK_THROWS_AS(parse_real("nan"), FormatError);
    CHECK_THROWS_AS(parse_real("inf"), FormatError);
    CHECK_THROWS_AS(parse_real("1.5x"), FormatError);
    CHECK_THROWS_AS(format_real(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("instance files") {
    auto inst = six_fault();
    auto text = serialize_instance(inst);
    CHECK(contains(text, "tree 4 3\n"));
    CHECK(contains(text, "readout 0101 0101 0101 1111\n"));
    CHECK(parse_instance(text) == inst);

    auto weighted = inst;
    weighted.params.lambda_ancilla = 7.5;
    weighted.params.lambda_path = 4.25;
    CHECK(parse_instance(serialize_instance(weighted)) == weighted);

    auto parsed = parse_instance("# comment\ntree 4 3   # trailing\nreadout 0101 0101 0101 1111\n");
    CHECK(parsed.observation.low_count() == 6);
    CHECK(parsed.params == PenaltyParams{});

    CHECK_THROWS_AS(parse_instance("tree 4 3\nreadout 0101 0101 0101 111\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("readout 0001\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\nreadout 0001\nsource 2\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\nreadout 0001\nedge 1 2\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\nreadout 0001\ncolour red\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\nreadout 0001\nlambda_path 0.5\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 1 2\nreadout 0001\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4\nreadout 0001\n"), FormatError);
    CHECK_THROWS_AS(parse_instance("tree 4 2\ntree 4 2\nreadout 0001\n"), FormatError);

    try {
        parse_instance("tree 4 2\nreadout 0001\nbogus 1\n");
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(contains(e.what(), "line 3"));
    }
}

TEST_CASE("QUBO files") {
    auto inst = six_fault();
    auto q = compile(inst.network, inst.observation, inst.params).qubo;
    auto text = serialize_qubo(q);
    CHECK(contains(text, "p qubo 46 "));
    CHECK(contains(text, "# variables 46 (cb 21, sensor 16, ancilla 9)"));
    CHECK(contains(text, "hash " + hash_hex(model_hash(q))));
    auto back = parse_qubo(text);
    CHECK(back == q);
    CHECK(model_hash(back) == model_hash(q));

    Qubo generic(VariableRegistry::generic(3));
    generic.add(0, 2, 0.1);
    generic.add(1, 1, -2.0 / 3.0);
    generic.add_offset(1e-300);
    CHECK(parse_qubo(serialize_qubo(generic)) == generic);

    // Tampering with a coefficient breaks the hash.
    auto pos = text.rfind('\n', text.size() - 2);
    auto tampered = text.substr(0, pos + 1) + "0 1 123\n";
    CHECK_THROWS_AS(parse_qubo(tampered), FormatError);

    CHECK_THROWS_AS(parse_qubo("p qubo 2 1\noffset 0\nvar 0 generic:q1\nvar 1 generic:q2\n1 0 1\n"), FormatError);
    CHECK_THROWS_AS(parse_qubo("p qubo 2 1\noffset 0\nvar 0 generic:q1\nvar 1 generic:q2\n0 2 1\n"), FormatError);
    CHECK_THROWS_AS(parse_qubo("p qubo 2 2\noffset 0\nvar 0 generic:q1\nvar 1 generic:q2\n0 1 1\n"), FormatError);
    CHECK_THROWS_AS(parse_qubo("p qubo 2 0\noffset 0\nvar 0 cb:x1\nvar 1 generic:q2\n"), FormatError);
    CHECK_THROWS_AS(parse_qubo("p qubo 1 0\noffset 0\nvar 0 cb:x7\n"), FormatError);
    CHECK_THROWS_AS(parse_qubo("offset 0\n"), FormatError);
    CHECK(parse_qubo("p qubo 2 1\noffset 0.5\nvar 0 generic:q1\nvar 1 generic:q2\n0 1 -1\n").coefficient(0, 1) == -1.0);
}

TEST_CASE("embedding files") {
    EmbeddingFile file{"00000000deadbeef", build_chimera(8, 8, 4, {3, 100, 257}),
                       Embedding{{{0, 4}, {5}, {1, 6, 9}}}};
    auto text = serialize_embedding(file);
    CHECK(contains(text, "hw 8 8 4\n"));
    CHECK(contains(text, "broken 3 100 257\n"));
    CHECK(contains(text, "chain 0: 0 4\n"));
    auto back = parse_embedding(text);
    CHECK(back.hash == file.hash);
    CHECK(back.embedding == file.embedding);
    CHECK(back.hardware.broken() == file.hardware.broken());
    CHECK(back.hardware.rows() == 8);

    CHECK_THROWS_AS(parse_embedding("chain 0: 1\n"), FormatError);
    CHECK_THROWS_AS(parse_embedding("hw 1 1 4\nchain 1: 0\n"), FormatError);
    CHECK_THROWS_AS(parse_embedding("hw 1 1 4\nbroken 2\nchain 0: 2\n"), FormatError);
    CHECK_THROWS_AS(parse_embedding("hw 1 1 4\nchain 0: 9\n"), FormatError);
    CHECK_THROWS_AS(parse_embedding("hw 1 1 4\nchain 0 1\n"), FormatError);
}

TEST_CASE("samples files") {
    IsingModel m(3);
    m.set_J(0, 1, -1.0);
    m.set_h(2, 0.3);
    AnnealConfig cfg;
    cfg.reads = 40;
    cfg.sweeps = 20;
    cfg.seed = 3;
    SamplesFile file{"0123456789abcdef", "physical", simulated_anneal(m, cfg)};
    auto back = parse_samples(serialize_samples(file));
    CHECK(back.hash == file.hash);
    CHECK(back.space == "physical");
    CHECK(back.samples == file.samples);

    auto bits = parse_samples("reads 3\n-1 2 110\n1 1 +-+\n");
    CHECK(bits.samples.records[0].spins == SpinVector{1, 1, -1});
    CHECK(bits.samples.records[1].spins == SpinVector{1, -1, 1});

    CHECK_THROWS_AS(parse_samples("reads 3\n-1 2 ++\n"), FormatError);
    CHECK_THROWS_AS(parse_samples("reads 2\n-1 1 ++\n-1 1 +\n"), FormatError);
    CHECK_THROWS_AS(parse_samples("reads 1\n-1 1 +x\n"), FormatError);
    CHECK_THROWS_AS(parse_samples("-1 1 ++\n"), FormatError);
    CHECK_THROWS_AS(parse_samples("space sideways\nreads 0\n"), FormatError);
}

TEST_CASE("qubit lists") {
    CHECK(parse_qubit_list("# broken\n3 100\n257\n") == std::set<int>{3, 100, 257});
    CHECK(parse_qubit_list("").empty());
    CHECK_THROWS_AS(parse_qubit_list("3 x"), FormatError);
}

TEST_CASE("stats table") {
    std::vector<GaugeRow> rows = {{1, {33}, 100000}, {2, {145}, 100000}};
    std::vector<GaugeSummary> blocks = {summarize_gauges(rows, 20e-6)};
    auto table = format_stats_table(blocks);
    CHECK(contains(table, "20 us"));
    CHECK(contains(table, "No Gauge"));
    CHECK(contains(table, "13953"));
    CHECK(contains(table, "0.2791"));
    CHECK(contains(table, "3174"));
    CHECK(contains(table, "0.0635"));
    CHECK(contains(table, "Average"));

    std::vector<GaugeSummary> missing = {summarize_gauges({{1, {0}, 10}}, 20e-6)};
    CHECK(contains(format_stats_table(missing), "not found"));
    CHECK(contains(format_gauge_rows(blocks[0]), "2 100000 145 145 145"));
}

TEST_CASE("report text") {
    DiagnosisReport r;
    r.oracle_min_faults = 2;
    r.oracle_multiplicity = 1;
    r.sampled_min_faults = 2;
    r.candidates.push_back({FaultSet{{1}, {4}}, 2.0, 10});
    r.agrees = true;
    auto text = format_report(r);
    CHECK(contains(text, "oracle min faults: 2 (1 minimal diagnoses)"));
    CHECK(contains(text, "oracle agreement: yes"));
    CHECK(contains(text, "{CB 1, sensor 4}"));
    r.agrees = false;
    CHECK(contains(format_report(r), "oracle agreement: NO"));
}

TEST_CASE("file helpers") {
    CHECK_THROWS_AS(read_file("/nonexistent/dir/file.txt"), FormatError);
    CHECK_THROWS_AS(write_file("/nonexistent/dir/file.txt", "x"), FormatError);
}
