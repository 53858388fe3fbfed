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

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "qdiag/embed.hpp"
#include "qdiag/error.hpp"
#include "qdiag/formats.hpp"
#include "qdiag/netmodel.hpp"
#include "qdiag/quadratizer.hpp"
#include "qdiag/solvers.hpp"
#include "qdiag/spinmodels.hpp"
#include "qdiag/stats.hpp"

namespace py = pybind11;
using namespace qdiag;

namespace {

void bind_network(py::module_& m) {
    py::class_<PowerNetwork>(m, "PowerNetwork")
        .def_static("build_tree", &PowerNetwork::build_tree, py::arg("arity"), py::arg("depth"))
        .def_property_readonly("arity", &PowerNetwork::arity)
        .def_property_readonly("depth", &PowerNetwork::depth)
        .def_property_readonly("cb_count", &PowerNetwork::cb_count)
        .def_property_readonly("sensor_count", &PowerNetwork::sensor_count)
        .def("level", &PowerNetwork::level)
        .def("parent", &PowerNetwork::parent)
        .def("children", &PowerNetwork::children)
        .def("path", &PowerNetwork::path, py::arg("sensor"))
        .def("cb_at", &PowerNetwork::cb_at, py::arg("sensor"), py::arg("level"))
        .def(py::self == py::self)
        .def("__repr__", [](const PowerNetwork& n) {
            return "PowerNetwork(arity=" + std::to_string(n.arity()) + ", depth=" + std::to_string(n.depth()) + ")";
        });
    m.def("build_tree", &PowerNetwork::build_tree, py::arg("arity"), py::arg("depth"));

    py::class_<Observation>(m, "Observation")
        .def(py::init<std::vector<std::uint8_t>>(), py::arg("readouts"))
        .def_static("parse", &Observation::parse, py::arg("text"))
        .def_static("all_high", &Observation::all_high, py::arg("network"))
        .def_property_readonly("readouts", &Observation::readouts)
        .def("high", &Observation::high, py::arg("sensor"))
        .def("low_count", &Observation::low_count)
        .def("to_string", &Observation::to_string, py::arg("group") = 4)
        .def("__len__", &Observation::size)
        .def(py::self == py::self);

    py::class_<FaultSet>(m, "FaultSet")
        .def(py::init<>())
        .def(py::init([](const std::vector<int>& cbs, const std::vector<int>& sensors) {
                 return FaultSet{{cbs.begin(), cbs.end()}, {sensors.begin(), sensors.end()}};
             }),
             py::arg("cbs"), py::arg("sensors") = std::vector<int>{})
        .def_readwrite("cbs", &FaultSet::cbs)
        .def_readwrite("sensors", &FaultSet::sensors)
        .def("__len__", &FaultSet::size)
        .def("__str__", &FaultSet::to_string)
        .def("__repr__", [](const FaultSet& f) { return "FaultSet" + f.to_string(); })
        .def("__hash__", [](const FaultSet& f) { return py::hash(py::make_tuple(py::tuple(py::cast(f.cbs)), py::tuple(py::cast(f.sensors)))); })
        .def(py::self == py::self)
        .def(py::self < py::self);

    m.def("simulate_readout", &simulate_readout, py::arg("network"), py::arg("faults"));
}

void bind_energy(py::module_& m) {
    py::class_<PenaltyParams>(m, "PenaltyParams")
        .def(py::init([](double path, double cb, double sensor, std::optional<double> ancilla) {
                 PenaltyParams p{path, cb, sensor, ancilla};
                 p.validate();
                 return p;
             }),
             py::arg("lambda_path") = 3.0, py::arg("lambda_fault_cb") = 1.0, py::arg("lambda_fault_sensor") = 1.0,
             py::arg("lambda_ancilla") = py::none())
        .def_readwrite("lambda_path", &PenaltyParams::lambda_path)
        .def_readwrite("lambda_fault_cb", &PenaltyParams::lambda_fault_cb)
        .def_readwrite("lambda_fault_sensor", &PenaltyParams::lambda_fault_sensor)
        .def_readwrite("lambda_ancilla", &PenaltyParams::lambda_ancilla);

    py::class_<VariableRegistry>(m, "VariableRegistry")
        .def_property_readonly("size", &VariableRegistry::size)
        .def_property_readonly("cb_count", &VariableRegistry::cb_count)
        .def_property_readonly("sensor_count", &VariableRegistry::sensor_count)
        .def_property_readonly("ancilla_count", &VariableRegistry::ancilla_count)
        .def("label", &VariableRegistry::label)
        .def("role", [](const VariableRegistry& r, int var) { return to_string(r.role(var)); });

    py::class_<PseudoBoolean>(m, "PseudoBoolean")
        .def_property_readonly("constant", &PseudoBoolean::constant)
        .def_property_readonly("terms", &PseudoBoolean::terms)
        .def_property_readonly("registry", &PseudoBoolean::registry)
        .def("degree", &PseudoBoolean::degree)
        .def("evaluate", [](const PseudoBoolean& p, const std::vector<std::uint8_t>& a) { return evaluate(p, a); });

    m.def("build_problem", &build_problem, py::arg("network"), py::arg("observation"),
          py::arg("params") = PenaltyParams{});
    m.def("is_consistent", [](const PowerNetwork& net, const Observation& obs, const std::vector<std::uint8_t>& a) {
        return is_consistent(net, obs, a);
    }, py::arg("network"), py::arg("observation"), py::arg("assignment"));
    m.def("faults_of", [](const PowerNetwork& net, const std::vector<std::uint8_t>& a) { return faults_of(net, a); },
          py::arg("network"), py::arg("assignment"));
    m.def("assignment_of", &assignment_of, py::arg("network"), py::arg("faults"));
}

void bind_models(py::module_& m) {
    py::class_<Qubo>(m, "Qubo")
        .def_property_readonly("size", &Qubo::size)
        .def_property_readonly("offset", &Qubo::offset)
        .def_property_readonly("registry", &Qubo::registry)
        .def_property_readonly("coefficients", &Qubo::coefficients)
        .def("coefficient", &Qubo::coefficient)
        .def("energy", [](const Qubo& q, const std::vector<std::uint8_t>& bits) { return q.energy(bits); })
        .def(py::self == py::self);

    py::class_<Compilation>(m, "Compilation")
        .def_readonly("problem", &Compilation::problem)
        .def_readonly("qubo", &Compilation::qubo)
        .def_property_readonly("ancilla_count", [](const Compilation& c) { return c.plan.ancilla_count(); });
    m.def("compile", &compile, py::arg("network"), py::arg("observation"), py::arg("params") = PenaltyParams{});

    py::class_<IsingModel>(m, "IsingModel")
        .def(py::init<int>(), py::arg("n"))
        .def_property_readonly("size", &IsingModel::size)
        .def_property_readonly("h", py::overload_cast<>(&IsingModel::h, py::const_))
        .def_property_readonly("J", py::overload_cast<>(&IsingModel::J, py::const_))
        .def_property("offset", &IsingModel::offset, &IsingModel::set_offset)
        .def("set_h", &IsingModel::set_h)
        .def("set_J", &IsingModel::set_J)
        .def("energy", [](const IsingModel& im, const SpinVector& s) { return ising_energy(im, s); })
        .def(py::self == py::self);

    py::class_<Gauge>(m, "Gauge")
        .def(py::init([](std::vector<Spin> signs) { return Gauge{std::move(signs)}; }), py::arg("signs"))
        .def_static("identity", &Gauge::identity)
        .def_static("random", &Gauge::random, py::arg("n"), py::arg("seed"))
        .def_readonly("signs", &Gauge::signs);

    m.def("qubo_to_ising", &qubo_to_ising, py::arg("qubo"));
    m.def("ising_to_qubo", py::overload_cast<const IsingModel&>(&ising_to_qubo), py::arg("model"));
    m.def("apply_gauge", &apply_gauge, py::arg("model"), py::arg("gauge"));
    m.def("ungauge_sample", [](const SpinVector& s, const Gauge& g) { return ungauge_sample(s, g); });
    m.def("normalize", [](const IsingModel& im) {
        auto n = normalize(im);
        return py::make_tuple(n.model, n.scale);
    }, py::arg("model"));
    m.def("ising_energy", [](const IsingModel& im, const SpinVector& s) { return ising_energy(im, s); });
}

void bind_solvers(py::module_& m) {
    py::class_<SampleRecord>(m, "SampleRecord")
        .def_readonly("spins", &SampleRecord::spins)
        .def_readonly("energy", &SampleRecord::energy)
        .def_readonly("occurrences", &SampleRecord::occurrences);

    py::class_<SampleSet>(m, "SampleSet")
        .def_readonly("records", &SampleSet::records)
        .def_readonly("total_reads", &SampleSet::total_reads)
        .def("lowest_energy", &SampleSet::lowest_energy)
        .def(py::self == py::self);

    py::class_<AnnealConfig>(m, "AnnealConfig")
        .def(py::init([](std::uint64_t reads, int sweeps, double beta_start, std::optional<double> beta_end,
                         std::uint64_t seed, unsigned threads) {
                 return AnnealConfig{reads, sweeps, beta_start, beta_end, seed, threads};
             }),
             py::arg("reads") = 1000, py::arg("sweeps") = 1000, py::arg("beta_start") = 0.1,
             py::arg("beta_end") = py::none(), py::arg("seed") = 0, py::arg("threads") = 0)
        .def_readwrite("reads", &AnnealConfig::reads)
        .def_readwrite("sweeps", &AnnealConfig::sweeps)
        .def_readwrite("beta_start", &AnnealConfig::beta_start)
        .def_readwrite("beta_end", &AnnealConfig::beta_end)
        .def_readwrite("seed", &AnnealConfig::seed)
        .def_readwrite("threads", &AnnealConfig::threads);

    m.def("simulated_anneal", &simulated_anneal, py::arg("model"), py::arg("config") = AnnealConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<BruteForceResult>(m, "BruteForceResult")
        .def_readonly("min_energy", &BruteForceResult::min_energy)
        .def_readonly("minimizers", &BruteForceResult::minimizers);
    m.def("brute_force_minimize", py::overload_cast<const Qubo&>(&brute_force_minimize), py::arg("qubo"));
    m.def("brute_force_minimize", py::overload_cast<const IsingModel&>(&brute_force_minimize), py::arg("model"));

    py::class_<DiagnosisCore>(m, "DiagnosisCore")
        .def_readonly("min_faults", &DiagnosisCore::min_faults)
        .def_readonly("multiplicity", &DiagnosisCore::multiplicity)
        .def_readonly("witness", &DiagnosisCore::witness);
    m.def("tree_dp_diagnose", &tree_dp_diagnose, py::arg("network"), py::arg("observation"));
    m.def("enumerate_minimal_diagnoses", &enumerate_minimal_diagnoses, py::arg("network"), py::arg("observation"),
          py::arg("limit") = std::size_t{1} << 16);

    py::class_<Candidate>(m, "Candidate")
        .def_readonly("faults", &Candidate::faults)
        .def_readonly("energy", &Candidate::energy)
        .def_readonly("occurrences", &Candidate::occurrences);

    py::class_<DiagnosisReport>(m, "DiagnosisReport")
        .def_readonly("oracle_min_faults", &DiagnosisReport::oracle_min_faults)
        .def_readonly("oracle_multiplicity", &DiagnosisReport::oracle_multiplicity)
        .def_readonly("sampled_min_faults", &DiagnosisReport::sampled_min_faults)
        .def_readonly("candidates", &DiagnosisReport::candidates)
        .def_readonly("inconsistent_reads", &DiagnosisReport::inconsistent_reads)
        .def_readonly("agrees", &DiagnosisReport::agrees)
        .def("optimal_candidate_count", &DiagnosisReport::optimal_candidate_count)
        .def("__str__", [](const DiagnosisReport& r) { return format_report(r); });
    m.def("diagnose", &diagnose, py::arg("network"), py::arg("observation"), py::arg("params") = PenaltyParams{},
          py::arg("config") = AnnealConfig{}, py::call_guard<py::gil_scoped_release>());
}

void bind_embed(py::module_& m) {
    py::class_<HardwareGraph>(m, "HardwareGraph")
        .def_static("chimera", &HardwareGraph::chimera, py::arg("rows") = 8, py::arg("cols") = 8,
                    py::arg("shore") = 4, py::arg("broken") = std::set<int>{})
        .def_property_readonly("num_qubits", &HardwareGraph::num_qubits)
        .def_property_readonly("usable_count", &HardwareGraph::usable_count)
        .def_property_readonly("broken", &HardwareGraph::broken)
        .def("neighbors", &HardwareGraph::neighbors)
        .def("has_edge", &HardwareGraph::has_edge);

    py::class_<LogicalGraph>(m, "LogicalGraph")
        .def(py::init([](int n, std::vector<std::pair<int, int>> edges) { return LogicalGraph{n, std::move(edges)}; }),
             py::arg("n"), py::arg("edges"))
        .def_static("from_qubo", &LogicalGraph::from_qubo)
        .def_static("from_ising", &LogicalGraph::from_ising)
        .def_readonly("n", &LogicalGraph::n)
        .def_readonly("edges", &LogicalGraph::edges);

    py::class_<Embedding>(m, "Embedding")
        .def(py::init([](std::vector<std::vector<int>> chains) { return Embedding{std::move(chains)}; }))
        .def_readonly("chains", &Embedding::chains)
        .def("physical_qubit_count", &Embedding::physical_qubit_count)
        .def("max_chain_length", &Embedding::max_chain_length);

    py::class_<EmbedOptions>(m, "EmbedOptions")
        .def(py::init<>())
        .def_readwrite("restarts", &EmbedOptions::restarts)
        .def_readwrite("max_restarts", &EmbedOptions::max_restarts)
        .def_readwrite("overlap_passes", &EmbedOptions::overlap_passes)
        .def_readwrite("refine_passes", &EmbedOptions::refine_passes);

    m.def("find_embedding", &find_embedding, py::arg("graph"), py::arg("hardware"), py::arg("seed") = 1,
          py::arg("options") = EmbedOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("check_embedding", [](const Embedding& e, const LogicalGraph& g, const HardwareGraph& hw) {
        auto c = check_embedding(e, g, hw);
        return py::make_tuple(c.ok, c.reason);
    });

    py::class_<EmbeddedModel>(m, "EmbeddedModel")
        .def_readonly("physical", &EmbeddedModel::physical)
        .def_readonly("scale", &EmbeddedModel::scale)
        .def_readonly("chain_strength", &EmbeddedModel::chain_strength)
        .def("chain_offset", &EmbeddedModel::chain_offset);
    m.def("embed_ising", &embed_ising, py::arg("model"), py::arg("embedding"), py::arg("hardware"),
          py::arg("chain_strength") = py::none());
}

void bind_stats(py::module_& m) {
    m.def("estimate_ps", &estimate_ps, py::arg("samples"), py::arg("ground_energy"), py::arg("tol") = 1e-9);
    m.def("repetitions", &repetitions, py::arg("p_s"), py::arg("certainty") = 0.99);
    m.def("time_to_solution", &time_to_solution, py::arg("repetitions"), py::arg("anneal_time"));
}

void bind_formats(py::module_& m) {
    py::class_<Instance>(m, "Instance")
        .def(py::init([](PowerNetwork net, Observation obs, PenaltyParams params) {
                 return Instance{std::move(net), std::move(obs), params};
             }),
             py::arg("network"), py::arg("observation"), py::arg("params") = PenaltyParams{})
        .def_readonly("network", &Instance::network)
        .def_readonly("observation", &Instance::observation)
        .def_readonly("params", &Instance::params)
        .def(py::self == py::self);
    m.def("parse_instance", &parse_instance, py::arg("text"));
    m.def("serialize_instance", &serialize_instance, py::arg("instance"));
    m.def("serialize_qubo", &serialize_qubo, py::arg("qubo"));
    m.def("parse_qubo", &parse_qubo, py::arg("text"));
}

}  // namespace

PYBIND11_MODULE(_qdiag, m) {
    m.doc() = "Multi-fault diagnosis on tree power networks as QUBO/Ising problems";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
    py::register_exception<FormatError>(m, "FormatError", base);
    py::register_exception<EmbeddingNotFound>(m, "EmbeddingNotFound", base);

    bind_network(m);
    bind_energy(m);
    bind_models(m);
    bind_solvers(m);
    bind_embed(m);
    bind_stats(m);
    bind_formats(m);
}
