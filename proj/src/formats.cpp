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

#include "qdiag/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "qdiag/error.hpp"
#include "qdiag/seed.hpp"

namespace qdiag {

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            if (j > i) line.tokens.emplace_back(raw.substr(i, j - i));
            i = j;
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        pos = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
    throw FormatError("line " + std::to_string(line.number) + ": " + what);
}

long long parse_int(const Line& line, std::string_view text) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(line, "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_real_at(const Line& line, std::string_view text) {
    try {
        return parse_real(text);
    } catch (const FormatError& e) {
        fail(line, e.what());
    }
}

void expect_arity(const Line& line, std::size_t n) {
    if (line.tokens.size() != n) {
        fail(line, "'" + line.tokens[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
    }
}

std::string qubo_body(const Qubo& q) {
    std::ostringstream os;
    os << "p qubo " << q.size() << ' ' << q.coefficients().size() << '\n';
    os << "offset " << format_real(q.offset()) << '\n';
    const auto& reg = q.registry();
    for (int v = 0; v < q.size(); ++v) {
        os << "var " << v << ' ' << to_string(reg.role(v)) << ':' << reg.label(v) << '\n';
    }
    for (const auto& [ij, c] : q.coefficients()) {
        os << ij.first << ' ' << ij.second << ' ' << format_real(c) << '\n';
    }
    return os.str();
}

std::string spin_string(const SpinVector& s) {
    std::string out(s.size(), '-');
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] > 0) out[i] = '+';
    }
    return out;
}

}  // namespace

std::string format_real(double value) {
    if (!std::isfinite(value)) {
        throw InvalidArgument("cannot write a non-finite real");
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw InvalidArgument("cannot format real");
    }
    return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw FormatError("expected a real number, got '" + std::string(text) + "'");
    }
    return v;
}

Instance parse_instance(std::string_view text) {
    std::optional<PowerNetwork> net;
    std::optional<Observation> obs;
    PenaltyParams params;
    for (const auto& line : tokenize(text)) {
        const std::string& key = line.tokens[0];
        if (key == "tree") {
            expect_arity(line, 3);
            if (net) fail(line, "duplicate tree line");
            try {
                net = PowerNetwork::build_tree(static_cast<int>(parse_int(line, line.tokens[1])),
                                               static_cast<int>(parse_int(line, line.tokens[2])));
            } catch (const InvalidArgument& e) {
                fail(line, e.what());
            }
        } else if (key == "readout") {
            if (obs) fail(line, "duplicate readout line");
            std::string bits;
            for (std::size_t i = 1; i < line.tokens.size(); ++i) bits += line.tokens[i];
            try {
                obs = Observation::parse(bits);
            } catch (const InvalidArgument& e) {
                fail(line, e.what());
            }
        } else if (key == "lambda_path") {
            expect_arity(line, 2);
            params.lambda_path = parse_real_at(line, line.tokens[1]);
        } else if (key == "lambda_fault_cb") {
            expect_arity(line, 2);
            params.lambda_fault_cb = parse_real_at(line, line.tokens[1]);
        } else if (key == "lambda_fault_sensor") {
            expect_arity(line, 2);
            params.lambda_fault_sensor = parse_real_at(line, line.tokens[1]);
        } else if (key == "lambda_ancilla") {
            expect_arity(line, 2);
            params.lambda_ancilla = parse_real_at(line, line.tokens[1]);
        } else if (key == "source" || key == "edge" || key == "graph" || key == "node") {
            fail(line, "only single-source tree networks are supported");
        } else {
            fail(line, "unknown keyword '" + key + "'");
        }
    }
    if (!net) throw FormatError("instance has no tree line");
    if (!obs) throw FormatError("instance has no readout line");
    if (obs->size() != static_cast<std::size_t>(net->sensor_count())) {
        throw FormatError("readout has " + std::to_string(obs->size()) + " bits but the tree has " +
                          std::to_string(net->sensor_count()) + " sensors");
    }
    try {
        params.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    return Instance{*net, *obs, params};
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream os;
    os << "tree " << inst.network.arity() << ' ' << inst.network.depth() << '\n';
    os << "readout " << inst.observation.to_string(inst.network.arity()) << '\n';
    os << "lambda_path " << format_real(inst.params.lambda_path) << '\n';
    os << "lambda_fault_cb " << format_real(inst.params.lambda_fault_cb) << '\n';
    os << "lambda_fault_sensor " << format_real(inst.params.lambda_fault_sensor) << '\n';
    if (inst.params.lambda_ancilla) {
        os << "lambda_ancilla " << format_real(*inst.params.lambda_ancilla) << '\n';
    }
    return os.str();
}

std::uint64_t model_hash(const Qubo& q) {
    return fnv1a64(qubo_body(q));
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string serialize_qubo(const Qubo& q) {
    const std::string body = qubo_body(q);
    const auto& reg = q.registry();
    std::ostringstream head;
    head << "hash " << hash_hex(fnv1a64(body)) << '\n';
    head << "# variables " << q.size() << " (cb " << reg.cb_count() << ", sensor " << reg.sensor_count()
         << ", ancilla " << reg.ancilla_count() << ")\n";
    return head.str() + body;
}

Qubo parse_qubo(std::string_view text) {
    std::optional<std::string> hash;
    std::optional<std::pair<long long, long long>> header;
    double offset = 0.0;
    std::vector<std::pair<int, std::string>> vars;
    std::vector<std::tuple<int, int, double>> terms;
    for (const auto& line : tokenize(text)) {
        const std::string& key = line.tokens[0];
        if (key == "hash") {
            expect_arity(line, 2);
            hash = line.tokens[1];
        } else if (key == "p") {
            expect_arity(line, 4);
            if (line.tokens[1] != "qubo") fail(line, "expected 'p qubo <n> <nterms>'");
            header = {parse_int(line, line.tokens[2]), parse_int(line, line.tokens[3])};
        } else if (key == "offset") {
            expect_arity(line, 2);
            offset = parse_real_at(line, line.tokens[1]);
        } else if (key == "var") {
            expect_arity(line, 3);
            vars.emplace_back(static_cast<int>(parse_int(line, line.tokens[1])), line.tokens[2]);
        } else {
            expect_arity(line, 3);
            terms.emplace_back(static_cast<int>(parse_int(line, line.tokens[0])),
                               static_cast<int>(parse_int(line, line.tokens[1])),
                               parse_real_at(line, line.tokens[2]));
        }
    }
    if (!header) throw FormatError("QUBO file has no 'p qubo' header");
    const auto [n, nterms] = *header;
    if (n < 0 || static_cast<long long>(vars.size()) != n) {
        throw FormatError("QUBO header declares " + std::to_string(n) + " variables but " +
                          std::to_string(vars.size()) + " var lines are present");
    }
    if (static_cast<long long>(terms.size()) != nterms) {
        throw FormatError("QUBO header declares " + std::to_string(nterms) + " terms but " +
                          std::to_string(terms.size()) + " are present");
    }
    int counts[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < vars.size(); ++k) {
        if (vars[k].first != static_cast<int>(k)) throw FormatError("var lines must be numbered 0..n-1 in order");
        const auto colon = vars[k].second.find(':');
        if (colon == std::string::npos) throw FormatError("var line needs <role>:<label>");
        try {
            ++counts[static_cast<int>(parse_var_role(vars[k].second.substr(0, colon)))];
        } catch (const InvalidArgument& e) {
            throw FormatError(e.what());
        }
    }
    VariableRegistry reg = counts[3] > 0 ? VariableRegistry::generic(counts[3])
                                         : VariableRegistry(counts[0], counts[1], counts[2]);
    if (counts[3] > 0 && counts[3] != n) throw FormatError("generic variables cannot mix with other roles");
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const std::string expect = to_string(reg.role(static_cast<int>(k))) + ":" + reg.label(static_cast<int>(k));
        if (vars[k].second != expect) {
            throw FormatError("var " + std::to_string(k) + " should be " + expect + ", got " + vars[k].second);
        }
    }
    Qubo q(reg);
    q.add_offset(offset);
    for (const auto& [i, j, c] : terms) {
        if (i < 0 || j < 0 || i >= n || j >= n || i > j) {
            throw FormatError("QUBO term (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
        }
        q.add(i, j, c);
    }
    if (hash && *hash != hash_hex(model_hash(q))) {
        throw FormatError("QUBO hash mismatch: file says " + *hash + ", content hashes to " +
                          hash_hex(model_hash(q)));
    }
    return q;
}

std::string serialize_embedding(const EmbeddingFile& file) {
    std::ostringstream os;
    if (!file.hash.empty()) os << "hash " << file.hash << '\n';
    os << "hw " << file.hardware.rows() << ' ' << file.hardware.cols() << ' ' << file.hardware.shore() << '\n';
    os << "broken";
    for (int q : file.hardware.broken()) os << ' ' << q;
    os << '\n';
    for (int u = 0; u < file.embedding.size(); ++u) {
        os << "chain " << u << ':';
        for (int q : file.embedding.chains[static_cast<std::size_t>(u)]) os << ' ' << q;
        os << '\n';
    }
    return os.str();
}

EmbeddingFile parse_embedding(std::string_view text) {
    EmbeddingFile out;
    std::optional<std::tuple<int, int, int>> dims;
    std::set<int> broken;
    for (const auto& line : tokenize(text)) {
        const std::string& key = line.tokens[0];
        if (key == "hash") {
            expect_arity(line, 2);
            out.hash = line.tokens[1];
        } else if (key == "hw") {
            expect_arity(line, 4);
            dims = {static_cast<int>(parse_int(line, line.tokens[1])), static_cast<int>(parse_int(line, line.tokens[2])),
                    static_cast<int>(parse_int(line, line.tokens[3]))};
        } else if (key == "broken") {
            for (std::size_t i = 1; i < line.tokens.size(); ++i) {
                broken.insert(static_cast<int>(parse_int(line, line.tokens[i])));
            }
        } else if (key == "chain") {
            if (line.tokens.size() < 3) fail(line, "chain needs a logical index and at least one qubit");
            std::string idx = line.tokens[1];
            if (idx.empty() || idx.back() != ':') fail(line, "expected 'chain <logical>: ...'");
            idx.pop_back();
            const auto u = parse_int(line, idx);
            if (u != out.embedding.size()) fail(line, "chains must be listed in logical order");
            std::vector<int> chain;
            for (std::size_t i = 2; i < line.tokens.size(); ++i) {
                chain.push_back(static_cast<int>(parse_int(line, line.tokens[i])));
            }
            out.embedding.chains.push_back(std::move(chain));
        } else {
            fail(line, "unknown keyword '" + key + "'");
        }
    }
    if (!dims) throw FormatError("embedding file has no hw line");
    try {
        out.hardware = HardwareGraph::chimera(std::get<0>(*dims), std::get<1>(*dims), std::get<2>(*dims), broken);
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    for (const auto& c : out.embedding.chains) {
        for (int q : c) {
            if (!out.hardware.usable(q)) throw FormatError("chain uses unusable qubit " + std::to_string(q));
        }
    }
    return out;
}

std::string serialize_samples(const SamplesFile& file) {
    std::ostringstream os;
    if (!file.hash.empty()) os << "hash " << file.hash << '\n';
    os << "space " << file.space << '\n';
    os << "reads " << file.samples.total_reads << '\n';
    os << "sampler " << file.samples.info.seed << ' ' << file.samples.info.sweeps << ' '
       << format_real(file.samples.info.beta_start) << ' ' << format_real(file.samples.info.beta_end) << '\n';
    for (const auto& r : file.samples.records) {
        os << format_real(r.energy) << ' ' << r.occurrences << ' ' << spin_string(r.spins) << '\n';
    }
    return os.str();
}

SamplesFile parse_samples(std::string_view text) {
    SamplesFile out;
    std::optional<std::uint64_t> reads;
    std::uint64_t total = 0;
    for (const auto& line : tokenize(text)) {
        const std::string& key = line.tokens[0];
        if (key == "hash") {
            expect_arity(line, 2);
            out.hash = line.tokens[1];
        } else if (key == "space") {
            expect_arity(line, 2);
            if (line.tokens[1] != "logical" && line.tokens[1] != "physical") fail(line, "space must be logical or physical");
            out.space = line.tokens[1];
        } else if (key == "reads") {
            expect_arity(line, 2);
            const auto r = parse_int(line, line.tokens[1]);
            if (r < 0) fail(line, "negative read count");
            reads = static_cast<std::uint64_t>(r);
        } else if (key == "sampler") {
            expect_arity(line, 5);
            out.samples.info = AnnealInfo{static_cast<std::uint64_t>(parse_int(line, line.tokens[1])),
                                          static_cast<int>(parse_int(line, line.tokens[2])),
                                          parse_real_at(line, line.tokens[3]), parse_real_at(line, line.tokens[4])};
        } else {
            expect_arity(line, 3);
            SampleRecord rec;
            rec.energy = parse_real_at(line, line.tokens[0]);
            const auto count = parse_int(line, line.tokens[1]);
            if (count < 1) fail(line, "occurrence counts must be positive");
            rec.occurrences = static_cast<std::uint64_t>(count);
            for (char c : line.tokens[2]) {
                if (c == '+' || c == '1') {
                    rec.spins.push_back(1);
                } else if (c == '-' || c == '0') {
                    rec.spins.push_back(-1);
                } else {
                    fail(line, std::string("bad spin character '") + c + "'");
                }
            }
            if (!out.samples.records.empty() && rec.spins.size() != out.samples.records.front().spins.size()) {
                fail(line, "sample length differs from earlier rows");
            }
            total += rec.occurrences;
            out.samples.records.push_back(std::move(rec));
        }
    }
    if (!reads) throw FormatError("samples file has no reads line");
    if (*reads != total) {
        throw FormatError("occurrence counts sum to " + std::to_string(total) + ", reads line says " +
                          std::to_string(*reads));
    }
    out.samples.total_reads = *reads;
    return out;
}

std::set<int> parse_qubit_list(std::string_view text) {
    std::set<int> out;
    for (const auto& line : tokenize(text)) {
        for (const auto& tok : line.tokens) {
            out.insert(static_cast<int>(parse_int(line, tok)));
        }
    }
    return out;
}

std::string format_stats_table(std::span<const GaugeSummary> blocks) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "";
    for (const auto& b : blocks) {
        std::ostringstream head;
        head << format_real(b.anneal_time * 1e6) << " us";
        os << " | " << std::setw(20) << head.str();
    }
    os << '\n' << std::setw(12) << "";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        os << " | " << std::setw(9) << "R" << ' ' << std::setw(10) << "t_QA (s)";
    }
    os << '\n';
    auto cell = [&](const AggregateRow& row) {
        std::ostringstream r;
        std::ostringstream t;
        if (row.repetitions) {
            r << std::fixed << std::setprecision(0) << *row.repetitions;
            t << std::fixed << std::setprecision(4) << *row.time_to_solution;
        } else {
            r << "not found";
            t << "-";
        }
        os << " | " << std::setw(9) << r.str() << ' ' << std::setw(10) << t.str();
    };
    for (int k = 0; k < 3; ++k) {
        const char* label = k == 0 ? "No Gauge" : k == 1 ? "Average" : "Best Gauge";
        os << std::setw(12) << label;
        for (const auto& b : blocks) {
            cell(k == 0 ? b.no_gauge : k == 1 ? b.average : b.best_gauge);
        }
        os << '\n';
    }
    return os.str();
}

std::string format_gauge_rows(const GaugeSummary& summary) {
    std::ostringstream os;
    os << "# gauge reads mean_hits min_hits max_hits p_s\n";
    for (const auto& g : summary.gauges) {
        os << g.gauge << ' ' << g.reads_per_repetition << ' ' << format_real(g.mean_hits()) << ' ' << g.min_hits()
           << ' ' << g.max_hits() << ' ' << format_real(g.p_s()) << '\n';
    }
    return os.str();
}

std::string format_report(const DiagnosisReport& report, std::size_t max_candidates) {
    std::ostringstream os;
    os << "oracle min faults: " << report.oracle_min_faults << " (" << report.oracle_multiplicity
       << " minimal diagnoses)\n";
    if (report.sampled_min_faults) {
        os << "sampled min faults: " << *report.sampled_min_faults << '\n';
    } else {
        os << "sampled min faults: none (no consistent sample)\n";
    }
    os << "distinct optimal candidates sampled: " << report.optimal_candidate_count() << '\n';
    os << "consistent candidates: " << report.candidates.size() << ", inconsistent reads: "
       << report.inconsistent_reads << '\n';
    os << "oracle agreement: " << (report.agrees ? "yes" : "NO") << '\n';
    const std::size_t shown = std::min(max_candidates, report.candidates.size());
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& c = report.candidates[i];
        os << "  #" << (i + 1) << " faults=" << c.faults.size() << " E=" << format_real(c.energy)
           << " seen=" << c.occurrences << ' ' << c.faults.to_string() << '\n';
    }
    if (shown < report.candidates.size()) {
        os << "  ... " << (report.candidates.size() - shown) << " more\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write '" + path + "'");
    }
    out << contents;
}

}  // namespace qdiag
