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

// qdiag: generate instances, compile them to QUBO, embed, sample, diagnose
// and summarize. Exit codes: 0 ok, 1 usage, 2 format, 3 embedding failure,
// 4 oracle disagreement.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdiag/embed.hpp"
#include "qdiag/energy.hpp"
#include "qdiag/error.hpp"
#include "qdiag/formats.hpp"
#include "qdiag/netmodel.hpp"
#include "qdiag/quadratizer.hpp"
#include "qdiag/seed.hpp"
#include "qdiag/solvers.hpp"
#include "qdiag/spinmodels.hpp"
#include "qdiag/stats.hpp"

namespace {

using namespace qdiag;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitEmbedding = 3;
constexpr int kExitDisagree = 4;

struct OracleDisagreement : Error {
    using Error::Error;
};

struct HardwareOptions {
    int rows = 8;
    int cols = 8;
    int shore = 4;
    std::string broken_path;

    HardwareGraph build() const {
        std::set<int> broken;
        if (!broken_path.empty()) {
            broken = parse_qubit_list(read_file(broken_path));
        }
        return HardwareGraph::chimera(rows, cols, shore, broken);
    }
};

struct SamplerOptions {
    std::uint64_t reads = 1000;
    int sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 0.0;  // 0 keeps the model-derived default
    unsigned threads = 0;

    AnnealConfig config(std::uint64_t seed) const {
        AnnealConfig c;
        c.reads = reads;
        c.sweeps = sweeps;
        c.beta_start = beta_start;
        if (beta_end > 0.0) c.beta_end = beta_end;
        c.seed = seed;
        c.threads = threads;
        return c;
    }
};

void add_hardware_options(CLI::App* cmd, HardwareOptions& hw) {
    cmd->add_option("--rows", hw.rows, "Chimera unit-cell rows")->check(CLI::PositiveNumber);
    cmd->add_option("--cols", hw.cols, "Chimera unit-cell columns")->check(CLI::PositiveNumber);
    cmd->add_option("--shore", hw.shore, "qubits per partition of a unit cell")->check(CLI::PositiveNumber);
    cmd->add_option("--broken", hw.broken_path, "file listing broken qubit indices")->check(CLI::ExistingFile);
}

void add_sampler_options(CLI::App* cmd, SamplerOptions& s) {
    cmd->add_option("--reads", s.reads, "annealing reads")->check(CLI::PositiveNumber);
    cmd->add_option("--sweeps", s.sweeps, "sweeps per read")->check(CLI::PositiveNumber);
    cmd->add_option("--beta-start", s.beta_start, "initial inverse temperature")->check(CLI::PositiveNumber);
    cmd->add_option("--beta-end", s.beta_end, "final inverse temperature (default: 2 max|coeff|)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", s.threads, "worker threads (default: all cores)");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

Instance load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

// Energy of the minimal diagnosis found by the tree oracle, which is also the
// ground energy of the compiled QUBO.
double ground_energy(const Instance& inst, const Compilation& c) {
    const DiagnosisCore core = tree_dp_diagnose(inst.network, inst.observation);
    return evaluate(c.problem, assignment_of(inst.network, core.witness));
}

void print_sizes(const Compilation& c) {
    std::cout << "variables " << c.qubo.size() << '\n'
              << "n_l " << c.qubo.size() << '\n'
              << "n_A " << c.plan.ancilla_count() << '\n'
              << "terms " << c.qubo.coefficients().size() << '\n'
              << "hash " << hash_hex(model_hash(c.qubo)) << '\n';
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    int arity = 4;
    int depth = 3;
    std::string readout;
    std::vector<int> cbs;
    std::vector<int> sensors;
    int random_faults = -1;
    double lambda_path = 3.0;
    double lambda_fault = 1.0;
    std::string out;
};

int cmd_gen(const GenArgs& a, std::uint64_t seed) {
    Instance inst{PowerNetwork::build_tree(a.arity, a.depth), Observation{{}}, PenaltyParams{}};
    inst.params.lambda_path = a.lambda_path;
    inst.params.lambda_fault_cb = a.lambda_fault;
    inst.params.lambda_fault_sensor = a.lambda_fault;
    inst.params.validate();
    const auto& net = inst.network;
    FaultSet faults;
    if (!a.readout.empty()) {
        inst.observation = Observation::parse(a.readout);
        check_observation(net, inst.observation);
    } else {
        if (a.random_faults >= 0) {
            const int total = net.cb_count() + net.sensor_count();
            if (a.random_faults > total) {
                throw InvalidArgument("cannot inject " + std::to_string(a.random_faults) + " faults into " +
                                      std::to_string(total) + " components");
            }
            std::vector<int> all(static_cast<std::size_t>(total));
            std::iota(all.begin(), all.end(), 0);
            std::mt19937_64 rng(derive_seed(seed, "gen"));
            std::vector<int> pick;
            std::sample(all.begin(), all.end(), std::back_inserter(pick), a.random_faults, rng);
            for (int v : pick) {
                if (v < net.cb_count()) {
                    faults.cbs.insert(v + 1);
                } else {
                    faults.sensors.insert(v - net.cb_count() + 1);
                }
            }
        }
        faults.cbs.insert(a.cbs.begin(), a.cbs.end());
        faults.sensors.insert(a.sensors.begin(), a.sensors.end());
        faults.validate(net);
        inst.observation = simulate_readout(net, faults);
    }
    std::ostringstream text;
    text << "# " << net.cb_count() << " CBs, " << net.sensor_count() << " sensors";
    if (a.readout.empty()) text << ", injected " << faults.to_string();
    text << '\n' << serialize_instance(inst);
    emit(a.out, text.str());
    if (!a.out.empty() && a.out != "-") {
        std::cout << "cbs " << net.cb_count() << "\nsensors " << net.sensor_count() << "\nreadout "
                  << inst.observation.to_string(net.arity()) << '\n';
    }
    return kExitOk;
}

// ---- compile ---------------------------------------------------------------

int cmd_compile(const std::string& instance_path, const std::string& out) {
    const Instance inst = load_instance(instance_path);
    const Compilation c = compile(inst.network, inst.observation, inst.params);
    emit(out, serialize_qubo(c.qubo));
    if (!out.empty() && out != "-") {
        print_sizes(c);
    }
    return kExitOk;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
    std::string qubo_path;
    std::string out;
    HardwareOptions hw;
    EmbedOptions options;
};

int cmd_embed(const EmbedArgs& a, std::uint64_t seed) {
    const Qubo q = parse_qubo(read_file(a.qubo_path));
    const HardwareGraph hw = a.hw.build();
    const IsingModel m = qubo_to_ising(q);
    const Embedding e = find_embedding(LogicalGraph::from_ising(m), hw, derive_seed(seed, "embed"), a.options);
    emit(a.out, serialize_embedding(EmbeddingFile{hash_hex(model_hash(q)), hw, e}));
    if (!a.out.empty() && a.out != "-") {
        std::cout << "n_l " << q.size() << "\nn_p " << e.physical_qubit_count() << "\nmax_chain "
                  << e.max_chain_length() << "\nusable_qubits " << hw.usable_count() << '\n';
    }
    return kExitOk;
}

// ---- sample ----------------------------------------------------------------

struct Sampled {
    SampleSet logical;
    int physical_qubits = 0;
    double broken_fraction = 0.0;
    double chain_strength = 0.0;
};

// Anneals the physical model and maps every read back through its chains.
// The schedule is read in logical energy units and divided by the
// normalization scale, so embedding does not heat the anneal up.
Sampled sample_embedded(const IsingModel& logical, const EmbeddingFile& ef, AnnealConfig config,
                        std::optional<double> chain_strength, std::uint64_t seed) {
    const EmbeddedModel em = embed_ising(logical, ef.embedding, ef.hardware, chain_strength);
    config.beta_end = config.beta_end.value_or(default_beta_end(logical)) / em.scale;
    config.beta_start /= em.scale;
    const SampleSet phys = simulated_anneal(em.physical, config);
    std::vector<SpinVector> expanded;
    expanded.reserve(phys.total_reads);
    for (const auto& r : phys.records) {
        for (std::uint64_t k = 0; k < r.occurrences; ++k) expanded.push_back(r.spins);
    }
    const auto decoded = decode_samples(expanded, ef.embedding, derive_seed(seed, "decode"));
    std::vector<SpinVector> spins;
    spins.reserve(decoded.size());
    double broken = 0.0;
    for (const auto& d : decoded) {
        spins.push_back(d.spins);
        broken += d.broken_fraction;
    }
    Sampled out;
    out.logical = SampleSet::from_reads(spins, logical, phys.info);
    out.physical_qubits = ef.embedding.physical_qubit_count();
    out.broken_fraction = decoded.empty() ? 0.0 : broken / static_cast<double>(decoded.size());
    out.chain_strength = em.chain_strength;
    return out;
}

struct SampleArgs {
    std::string qubo_path;
    std::string embedding_path;
    std::string out;
    SamplerOptions sampler;
    double chain_strength = 0.0;
};

int cmd_sample(const SampleArgs& a, std::uint64_t seed) {
    const Qubo q = parse_qubo(read_file(a.qubo_path));
    const std::string hash = hash_hex(model_hash(q));
    const IsingModel m = qubo_to_ising(q);
    const AnnealConfig config = a.sampler.config(derive_seed(seed, "sample"));
    SamplesFile file;
    file.hash = hash;
    if (a.embedding_path.empty()) {
        file.samples = simulated_anneal(m, config);
        std::cout << "n_l " << q.size() << '\n';
    } else {
        const EmbeddingFile ef = parse_embedding(read_file(a.embedding_path));
        if (ef.hash != hash) {
            throw FormatError("embedding was built for model " + ef.hash + ", not " + hash);
        }
        if (ef.embedding.size() != q.size()) {
            throw FormatError("embedding has " + std::to_string(ef.embedding.size()) + " chains for " +
                              std::to_string(q.size()) + " variables");
        }
        const Sampled s = sample_embedded(m, ef, config,
                                          a.chain_strength > 0.0 ? std::optional(a.chain_strength) : std::nullopt,
                                          seed);
        file.samples = s.logical;
        std::cout << "n_l " << q.size() << "\nn_p " << s.physical_qubits << "\nchain_strength "
                  << s.chain_strength << "\nbroken_chain_fraction " << s.broken_fraction << '\n';
    }
    emit(a.out, serialize_samples(file));
    std::cout << "lowest_energy " << file.samples.lowest_energy() << '\n';
    return kExitOk;
}

// ---- diagnose --------------------------------------------------------------

int cmd_diagnose(const std::string& instance_path, const std::string& samples_path, std::size_t limit) {
    const Instance inst = load_instance(instance_path);
    const DiagnosisCore core = tree_dp_diagnose(inst.network, inst.observation);
    if (samples_path.empty()) {
        std::cout << "oracle min faults: " << core.min_faults << " (" << core.multiplicity
                  << " minimal diagnoses)\n";
        for (const auto& f : enumerate_minimal_diagnoses(inst.network, inst.observation, limit)) {
            std::cout << "  " << f.to_string() << '\n';
        }
        return kExitOk;
    }
    const Compilation c = compile(inst.network, inst.observation, inst.params);
    const SamplesFile sf = parse_samples(read_file(samples_path));
    const std::string hash = hash_hex(model_hash(c.qubo));
    if (sf.hash != hash) {
        throw FormatError("samples were drawn from model " + sf.hash + ", instance compiles to " + hash);
    }
    if (sf.space != "logical") {
        throw FormatError("diagnosis needs logical samples");
    }
    const DiagnosisReport report = build_report(inst.network, inst.observation, sf.samples);
    print_sizes(c);
    std::cout << format_report(report, limit);
    if (!report.agrees) {
        throw OracleDisagreement("sampled minimum does not match the oracle");
    }
    return kExitOk;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
    std::vector<std::string> triples;
    std::string samples_path;
    std::string instance_path;
    std::string gauge_model;
    std::optional<double> ground;
    std::vector<double> anneal_times{20e-6};
    double certainty = 0.99;
    int gauges = 20;
    int repetitions = 3;
    SamplerOptions sampler;
    bool per_gauge = false;
};

std::string stats_line(const SolveStats& s) {
    std::ostringstream os;
    os << "hits " << s.ground_hits << " reads " << s.reads << " p_s " << s.p_s << " t_a " << s.anneal_time;
    if (s.repetitions) {
        os << " R " << *s.repetitions << " t_QA " << std::fixed << std::setprecision(4) << *s.time_to_solution;
    } else {
        os << " R never t_QA never";
    }
    return os.str();
}

int cmd_stats(const StatsArgs& a, std::uint64_t seed) {
    int modes = 0;
    modes += !a.triples.empty();
    modes += !a.samples_path.empty();
    modes += !a.gauge_model.empty();
    if (modes != 1) {
        throw InvalidArgument("give exactly one of --triple, --samples or --gauge-model");
    }
    for (const auto& t : a.triples) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
        if (parts.size() != 3) {
            throw InvalidArgument("--triple takes <hits>,<reads>,<anneal time>, got '" + t + "'");
        }
        const double hits = parse_real(parts[0]);
        const double reads = parse_real(parts[1]);
        if (hits < 0 || reads < 1 || hits != std::floor(hits) || reads != std::floor(reads)) {
            throw InvalidArgument("hits and reads must be non-negative integers");
        }
        std::cout << stats_line(solve_stats(static_cast<std::uint64_t>(hits), static_cast<std::uint64_t>(reads),
                                            parse_real(parts[2]), a.certainty))
                  << '\n';
    }
    if (!a.triples.empty()) return kExitOk;

    auto resolve_ground = [&](const std::string& expected_hash) {
        if (a.ground) return *a.ground;
        if (a.instance_path.empty()) {
            throw InvalidArgument("--ground or --instance is needed to know the ground energy");
        }
        const Instance inst = load_instance(a.instance_path);
        const Compilation c = compile(inst.network, inst.observation, inst.params);
        if (!expected_hash.empty() && hash_hex(model_hash(c.qubo)) != expected_hash) {
            throw FormatError("instance does not compile to model " + expected_hash);
        }
        return ground_energy(inst, c);
    };

    if (!a.samples_path.empty()) {
        const SamplesFile sf = parse_samples(read_file(a.samples_path));
        const double ground = resolve_ground(sf.hash);
        const auto hits = static_cast<std::uint64_t>(
            std::llround(estimate_ps(sf.samples, ground) * static_cast<double>(sf.samples.total_reads)));
        std::cout << "ground_energy " << ground << '\n';
        for (double ta : a.anneal_times) {
            std::cout << stats_line(solve_stats(hits, sf.samples.total_reads, ta, a.certainty)) << '\n';
        }
        return kExitOk;
    }

    const Qubo q = parse_qubo(read_file(a.gauge_model));
    GaugeExperimentConfig cfg;
    cfg.gauges = a.gauges;
    cfg.repetitions = a.repetitions;
    cfg.anneal = a.sampler.config(derive_seed(seed, "stats"));
    cfg.ground_energy = resolve_ground(hash_hex(model_hash(q)));
    cfg.certainty = a.certainty;
    cfg.anneal_time = a.anneal_times.front();
    const GaugeSummary first = gauge_experiment(qubo_to_ising(q), cfg);
    std::vector<GaugeSummary> blocks;
    for (double ta : a.anneal_times) {
        blocks.push_back(summarize_gauges(first.gauges, ta, a.certainty));
    }
    std::cout << "n_l " << q.size() << "\nground_energy " << cfg.ground_energy << '\n';
    if (a.per_gauge) std::cout << format_gauge_rows(first);
    std::cout << format_stats_table(blocks);
    return kExitOk;
}

// ---- pipeline --------------------------------------------------------------

struct PipelineArgs {
    std::string instance_path;
    std::string out_dir;
    HardwareOptions hw;
    EmbedOptions embed;
    SamplerOptions sampler;
    double chain_strength = 0.0;
    double anneal_time = 20e-6;
    double certainty = 0.99;
    bool logical = false;
    std::size_t limit = 10;
};

int cmd_pipeline(const PipelineArgs& a, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const Instance inst = load_instance(a.instance_path);
    const Compilation c = compile(inst.network, inst.observation, inst.params);
    const std::string hash = hash_hex(model_hash(c.qubo));
    const IsingModel m = qubo_to_ising(c.qubo);
    std::cout << "instance " << inst.network.cb_count() << " CBs, " << inst.network.sensor_count()
              << " sensors, readout " << inst.observation.to_string(inst.network.arity()) << '\n';
    print_sizes(c);

    auto write = [&](const std::string& name, const std::string& text) {
        if (a.out_dir.empty()) return;
        std::filesystem::create_directories(a.out_dir);
        write_file((std::filesystem::path(a.out_dir) / name).string(), text);
    };
    write("model.qubo", serialize_qubo(c.qubo));

    const AnnealConfig config = a.sampler.config(derive_seed(seed, "sample"));
    SamplesFile samples;
    samples.hash = hash;
    if (a.logical) {
        samples.samples = simulated_anneal(m, config);
    } else {
        const HardwareGraph hw = a.hw.build();
        const Embedding e = find_embedding(LogicalGraph::from_ising(m), hw, derive_seed(seed, "embed"), a.embed);
        const EmbeddingFile ef{hash, hw, e};
        write("embedding.txt", serialize_embedding(ef));
        std::cout << "n_p " << e.physical_qubit_count() << "\nmax_chain " << e.max_chain_length() << '\n';
        const Sampled s = sample_embedded(m, ef, config,
                                          a.chain_strength > 0.0 ? std::optional(a.chain_strength) : std::nullopt,
                                          seed);
        std::cout << "chain_strength " << s.chain_strength << "\nbroken_chain_fraction " << s.broken_fraction
                  << '\n';
        samples.samples = s.logical;
    }
    write("samples.txt", serialize_samples(samples));

    const DiagnosisReport report = build_report(inst.network, inst.observation, samples.samples);
    std::cout << format_report(report, a.limit);
    const double ground = ground_energy(inst, c);
    const double ps = estimate_ps(samples.samples, ground);
    const auto hits = static_cast<std::uint64_t>(std::llround(ps * static_cast<double>(samples.samples.total_reads)));
    std::cout << "ground_energy " << ground << '\n'
              << stats_line(solve_stats(hits, samples.samples.total_reads, a.anneal_time, a.certainty)) << '\n';
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "elapsed_s " << std::fixed << std::setprecision(2) << elapsed << '\n';
    if (!report.agrees) {
        throw OracleDisagreement("sampled minimum does not match the oracle");
    }
    std::cout << "verified against oracle: min faults " << report.oracle_min_faults << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO compiler and solvers for multi-fault diagnosis on tree power networks"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "master seed for every random choice")->capture_default_str();

    int rc = kExitOk;
    auto run = [&rc](auto&& fn) { return [&rc, fn] { rc = fn(); }; };

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "build a tree network and write an instance file");
    g->add_option("arity", gen.arity, "children per CB")->required();
    g->add_option("depth", gen.depth, "CB levels")->required();
    auto* g_readout = g->add_option("--readout", gen.readout, "explicit readout bits, e.g. \"0101 0111 1111 1111\"");
    auto* g_cb = g->add_option("--cb", gen.cbs, "faulted CB (repeatable)");
    auto* g_sensor = g->add_option("--sensor", gen.sensors, "faulted sensor (repeatable)");
    auto* g_random = g->add_option("--random-faults", gen.random_faults, "inject this many seeded random faults")
                         ->check(CLI::NonNegativeNumber);
    g_readout->excludes(g_cb)->excludes(g_sensor)->excludes(g_random);
    g->add_option("--lambda-path", gen.lambda_path, "consistency penalty")->capture_default_str();
    g->add_option("--lambda-fault", gen.lambda_fault, "per-fault penalty")->capture_default_str();
    g->add_option("-o,--out", gen.out, "output instance file (default stdout)");
    g->callback(run([&] { return cmd_gen(gen, seed); }));

    std::string compile_in;
    std::string compile_out;
    auto* cc = app.add_subcommand("compile", "compile an instance to a QUBO file");
    cc->add_option("instance", compile_in, "instance file")->required()->check(CLI::ExistingFile);
    cc->add_option("-o,--out", compile_out, "output QUBO file (default stdout)");
    cc->callback(run([&] { return cmd_compile(compile_in, compile_out); }));

    EmbedArgs emb;
    auto* e = app.add_subcommand("embed", "minor-embed a QUBO into a Chimera graph");
    e->add_option("qubo", emb.qubo_path, "QUBO file")->required()->check(CLI::ExistingFile);
    e->add_option("-o,--out", emb.out, "output embedding file (default stdout)");
    add_hardware_options(e, emb.hw);
    e->add_option("--restarts", emb.options.restarts, "successful attempts to compare")->check(CLI::PositiveNumber);
    e->add_option("--max-restarts", emb.options.max_restarts, "attempt budget")->check(CLI::PositiveNumber);
    e->callback(run([&] { return cmd_embed(emb, seed); }));

    SampleArgs smp;
    auto* s = app.add_subcommand("sample", "anneal a QUBO, optionally through an embedding");
    s->add_option("qubo", smp.qubo_path, "QUBO file")->required()->check(CLI::ExistingFile);
    s->add_option("--embedding", smp.embedding_path, "embedding file; sample the physical model")
        ->check(CLI::ExistingFile);
    s->add_option("--chain-strength", smp.chain_strength, "ferromagnetic chain coupling (default derived)")
        ->check(CLI::PositiveNumber);
    s->add_option("-o,--out", smp.out, "output samples file (default stdout)");
    add_sampler_options(s, smp.sampler);
    s->callback(run([&] { return cmd_sample(smp, seed); }));

    std::string diag_in;
    std::string diag_samples;
    std::size_t diag_limit = 20;
    auto* d = app.add_subcommand("diagnose", "minimal diagnoses, from the oracle or from samples");
    d->add_option("instance", diag_in, "instance file")->required()->check(CLI::ExistingFile);
    d->add_option("--samples", diag_samples, "rank these samples and check them against the oracle")
        ->check(CLI::ExistingFile);
    d->add_option("--limit", diag_limit, "diagnoses to list")->capture_default_str();
    d->callback(run([&] { return cmd_diagnose(diag_in, diag_samples, diag_limit); }));

    StatsArgs st;
    double st_ground = 0.0;
    auto* t = app.add_subcommand("stats", "repetitions and time-to-solution");
    t->add_option("--triple", st.triples, "<hits>,<reads>,<anneal time s> (repeatable)");
    t->add_option("--samples", st.samples_path, "samples file")->check(CLI::ExistingFile);
    t->add_option("--gauge-model", st.gauge_model, "QUBO file for a gauge experiment")->check(CLI::ExistingFile);
    t->add_option("--instance", st.instance_path, "instance file giving the ground energy")
        ->check(CLI::ExistingFile);
    auto* ground_opt = t->add_option("--ground", st_ground, "ground energy");
    t->add_option("--anneal-time", st.anneal_times, "anneal time in seconds (repeatable)")
        ->check(CLI::PositiveNumber);
    t->add_option("--certainty", st.certainty, "target success certainty P")->check(CLI::Range(0.0, 1.0));
    t->add_option("--gauges", st.gauges, "gauges, the first being the identity")->check(CLI::PositiveNumber);
    t->add_option("--repetitions", st.repetitions, "runs per gauge")->check(CLI::PositiveNumber);
    t->add_flag("--per-gauge", st.per_gauge, "also print per-gauge hit counts");
    add_sampler_options(t, st.sampler);
    t->callback(run([&] {
        if (ground_opt->count() > 0) st.ground = st_ground;
        return cmd_stats(st, seed);
    }));

    PipelineArgs pl;
    auto* p = app.add_subcommand("pipeline", "compile, embed, sample, decode and verify against the oracle");
    p->add_option("instance", pl.instance_path, "instance file")->required()->check(CLI::ExistingFile);
    p->add_option("--out-dir", pl.out_dir, "write every intermediate file here");
    add_hardware_options(p, pl.hw);
    add_sampler_options(p, pl.sampler);
    p->add_option("--restarts", pl.embed.restarts, "successful embedding attempts to compare")
        ->check(CLI::PositiveNumber);
    p->add_option("--max-restarts", pl.embed.max_restarts, "embedding attempt budget")->check(CLI::PositiveNumber);
    p->add_option("--chain-strength", pl.chain_strength, "ferromagnetic chain coupling (default derived)")
        ->check(CLI::PositiveNumber);
    p->add_option("--anneal-time", pl.anneal_time, "anneal time in seconds, for reporting")
        ->check(CLI::PositiveNumber);
    p->add_option("--certainty", pl.certainty, "target success certainty P")->check(CLI::Range(0.0, 1.0));
    p->add_flag("--logical", pl.logical, "sample the logical model, skipping the embedding");
    p->add_option("--limit", pl.limit, "candidates to list")->capture_default_str();
    p->callback(run([&] { return cmd_pipeline(pl, seed); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitUsage;
    } catch (const OracleDisagreement& err) {
        std::cerr << "qdiag: " << err.what() << '\n';
        return kExitDisagree;
    } catch (const FormatError& err) {
        std::cerr << "qdiag: format error: " << err.what() << '\n';
        return kExitFormat;
    } catch (const EmbeddingNotFound& err) {
        std::cerr << "qdiag: embedding failed: " << err.what() << '\n';
        return kExitEmbedding;
    } catch (const InvalidArgument& err) {
        std::cerr << "qdiag: " << err.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "qdiag: " << err.what() << '\n';
        return kExitUsage;
    }
    return rc;
}
