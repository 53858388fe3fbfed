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

// Line-oriented text formats shared by the command-line stages. '#' starts a
// comment; reals are written with 17 significant digits independent of the
// locale, so every file parses back to an identical value.

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "qdiag/embed.hpp"
#include "qdiag/energy.hpp"
#include "qdiag/netmodel.hpp"
#include "qdiag/quadratizer.hpp"
#include "qdiag/solvers.hpp"
#include "qdiag/stats.hpp"

namespace qdiag {

std::string format_real(double value);
double parse_real(std::string_view text);

// tree <k> <D>
// readout <bits> <bits> ...     (groups of k bits, sensor order)
// lambda_path <r>
// lambda_fault_cb <r>
// lambda_fault_sensor <r>
// lambda_ancilla <r>            (optional)
struct Instance {
    PowerNetwork network;
    Observation observation;
    PenaltyParams params;

    bool operator==(const Instance&) const = default;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& instance);

// hash <hex>
// p qubo <n> <nterms>
// offset <r>
// var <index> <role>:<label>    (one per variable)
// <i> <j> <coeff>               (0-based, i <= j; i = j is linear)
//
// The hash covers everything but the hash line and is checked on read.
std::uint64_t model_hash(const Qubo& q);
std::string hash_hex(std::uint64_t h);
std::string serialize_qubo(const Qubo& q);
Qubo parse_qubo(std::string_view text);

// hash <hex of the embedded QUBO>
// hw <M> <N> <L>
// broken <i> ...
// chain <logical>: <phys> <phys> ...
struct EmbeddingFile {
    std::string hash;
    HardwareGraph hardware;
    Embedding embedding;
};

std::string serialize_embedding(const EmbeddingFile& file);
EmbeddingFile parse_embedding(std::string_view text);

// hash <hex>
// space logical|physical
// reads <N_r>
// <energy> <count> <spinstring>  ('+'/'-' per spin; '1'/'0' accepted on read)
struct SamplesFile {
    std::string hash;
    std::string space = "logical";
    SampleSet samples;
};

std::string serialize_samples(const SamplesFile& file);
SamplesFile parse_samples(std::string_view text);

// Whitespace-separated qubit indices, '#' comments allowed.
std::set<int> parse_qubit_list(std::string_view text);

// Rows No Gauge / Average / Best Gauge, an (R, t_QA) column pair per anneal time.
std::string format_stats_table(std::span<const GaugeSummary> blocks);

// Per-gauge hit counts: "<gauge> <reads> <hits> <hits> ..." lines.
std::string format_gauge_rows(const GaugeSummary& summary);

std::string format_report(const DiagnosisReport& report, std::size_t max_candidates = 20);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qdiag
