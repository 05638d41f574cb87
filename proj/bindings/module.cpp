#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asir/bridge.hpp"
#include "asir/ensemble.hpp"
#include "asir/errors.hpp"

namespace py = pybind11;
using namespace asir;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dual-engine epidemic simulation: compartmental SIR curves, their agent-based "
              "counterpart, parameter deduction between the two, and ensemble equivalence "
              "checks.";

    py::register_exception<Error>(m, "AsirError", PyExc_ValueError);

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_static("validated", &TransitionMatrix::validated, py::arg("rows"),
                    py::arg("error_context") = "")
        .def_static("grid_walk", &TransitionMatrix::grid_walk, py::arg("side"),
                    py::arg("stay_prob"))
        .def_property_readonly("n_locations", &TransitionMatrix::n_locations)
        .def("at", &TransitionMatrix::at, py::arg("row"), py::arg("col"))
        .def("to_dense", &TransitionMatrix::to_dense)
        .def("doubly_stochastic", &TransitionMatrix::doubly_stochastic,
             py::arg("tol") = 1e-12);

    py::class_<StationaryDistribution>(m, "StationaryDistribution")
        .def_readonly("probabilities", &StationaryDistribution::probabilities)
        .def_readonly("residual", &StationaryDistribution::residual);

    py::class_<ErgodicityReport>(m, "ErgodicityReport")
        .def_readonly("irreducible", &ErgodicityReport::irreducible)
        .def_readonly("aperiodic", &ErgodicityReport::aperiodic)
        .def_readonly("communicating_class_count",
                      &ErgodicityReport::communicating_class_count)
        .def_readonly("period", &ErgodicityReport::period);

    m.def("ergodicity", &ergodicity, py::arg("matrix"));
    m.def("stationary_distribution", &stationary_distribution, py::arg("matrix"));
    m.def("meetup_probability", &meetup_probability, py::arg("pi"));

    py::class_<SirParams>(m, "SirParams")
        .def(py::init([](double alpha, double beta, double n_total, double s0, double i0,
                         double r0, std::size_t horizon) {
                 SirParams p;
                 p.alpha = alpha;
                 p.beta = beta;
                 p.n_total = n_total;
                 p.s0 = s0;
                 p.i0 = i0;
                 p.r0 = r0;
                 p.horizon = horizon;
                 p.validate();
                 return p;
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("n_total"), py::arg("s0"),
             py::arg("i0"), py::arg("r0") = 0.0, py::arg("horizon") = 100)
        .def_readonly("alpha", &SirParams::alpha)
        .def_readonly("beta", &SirParams::beta)
        .def_readonly("n_total", &SirParams::n_total)
        .def_readonly("s0", &SirParams::s0)
        .def_readonly("i0", &SirParams::i0)
        .def_readonly("r0", &SirParams::r0)
        .def_readonly("horizon", &SirParams::horizon);

    py::class_<SirCurve>(m, "SirCurve")
        .def_readonly("s", &SirCurve::s)
        .def_readonly("i", &SirCurve::i)
        .def_readonly("r", &SirCurve::r)
        .def_property_readonly("horizon", &SirCurve::horizon);

    m.def("simulate_sir_euler", &simulate_sir_euler, py::arg("params"));
    m.def("simulate_sir_rk4", &simulate_sir_rk4, py::arg("params"), py::arg("substeps") = 100);

    py::class_<StationaryInit>(m, "StationaryInit").def(py::init<>());
    py::class_<PointMassInit>(m, "PointMassInit")
        .def(py::init([](std::uint32_t location) { return PointMassInit{location}; }),
             py::arg("location"))
        .def_readonly("location", &PointMassInit::location);
    py::class_<UniformInit>(m, "UniformInit").def(py::init<>());
    py::class_<SplitInit>(m, "SplitInit")
        .def(py::init([](std::uint32_t infected_location, std::uint32_t other_location) {
                 return SplitInit{infected_location, other_location};
             }),
             py::arg("infected_location"), py::arg("other_location"))
        .def_readonly("infected_location", &SplitInit::infected_location)
        .def_readonly("other_location", &SplitInit::other_location);

    py::class_<AsirConfig>(m, "AsirConfig")
        .def(py::init([](double alpha_prime, double beta_prime, TransitionMatrix map,
                         std::uint64_t n_agents, std::uint64_t s0, std::uint64_t i0,
                         std::uint64_t r0, std::size_t horizon, InitMode init_mode,
                         std::uint64_t seed) {
                 AsirConfig config;
                 config.alpha_prime = alpha_prime;
                 config.beta_prime = beta_prime;
                 config.map = std::move(map);
                 config.n_agents = n_agents;
                 config.s0 = s0;
                 config.i0 = i0;
                 config.r0 = r0;
                 config.horizon = horizon;
                 config.init_mode = init_mode;
                 config.seed = seed;
                 config.validate();
                 return config;
             }),
             py::arg("alpha_prime"), py::arg("beta_prime"), py::arg("map"),
             py::arg("n_agents"), py::arg("s0"), py::arg("i0"), py::arg("r0"),
             py::arg("horizon"), py::arg("init_mode") = InitMode(StationaryInit{}),
             py::arg("seed") = 0)
        .def_readonly("alpha_prime", &AsirConfig::alpha_prime)
        .def_readonly("beta_prime", &AsirConfig::beta_prime)
        .def_readonly("n_agents", &AsirConfig::n_agents)
        .def_readonly("horizon", &AsirConfig::horizon)
        .def_readonly("seed", &AsirConfig::seed);

    py::class_<StepRecord>(m, "StepRecord")
        .def_readonly("timestamp", &StepRecord::timestamp)
        .def_readonly("s_count", &StepRecord::s_count)
        .def_readonly("i_count", &StepRecord::i_count)
        .def_readonly("r_count", &StepRecord::r_count)
        .def_readonly("new_infections", &StepRecord::new_infections)
        .def_readonly("new_recoveries", &StepRecord::new_recoveries)
        .def_readonly("clamp_events", &StepRecord::clamp_events);

    m.def(
        "run_replicate",
        [](const AsirConfig& config) { return run_replicate(config); },
        py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<BridgeResult>(m, "BridgeResult")
        .def_readonly("alpha_prime", &BridgeResult::alpha_prime)
        .def_readonly("beta_prime", &BridgeResult::beta_prime)
        .def_readonly("n_agents", &BridgeResult::n_agents)
        .def_readonly("s0", &BridgeResult::s0)
        .def_readonly("i0", &BridgeResult::i0)
        .def_readonly("r0", &BridgeResult::r0)
        .def_readonly("meetup", &BridgeResult::meetup)
        .def_readonly("pi", &BridgeResult::pi)
        .def_readonly("warnings", &BridgeResult::warnings)
        .def("make_config", &BridgeResult::make_config, py::arg("map"), py::arg("horizon"),
             py::arg("init_mode") = InitMode(StationaryInit{}), py::arg("seed") = 0);

    m.def("deduce_asir", &deduce_asir, py::arg("params"), py::arg("map"));
    m.def("implied_sir", &implied_sir, py::arg("config"));

    py::class_<Ensemble>(m, "Ensemble")
        .def_readonly("master_seed", &Ensemble::master_seed)
        .def_readonly("replicates", &Ensemble::replicates)
        .def_property_readonly("n_replicates", &Ensemble::n_replicates)
        .def_property_readonly("horizon", &Ensemble::horizon)
        .def("total_clamp_events", &Ensemble::total_clamp_events);

    m.def(
        "run_ensemble",
        [](const AsirConfig& config, std::size_t n_replicates, std::size_t workers) {
            return run_ensemble(config, n_replicates, workers);
        },
        py::arg("config"), py::arg("n_replicates"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

    py::class_<ReportPoint>(m, "ReportPoint")
        .def_readonly("mean_s", &ReportPoint::mean_s)
        .def_readonly("se_s", &ReportPoint::se_s)
        .def_readonly("mean_i", &ReportPoint::mean_i)
        .def_readonly("se_i", &ReportPoint::se_i)
        .def_readonly("mean_r", &ReportPoint::mean_r)
        .def_readonly("se_r", &ReportPoint::se_r)
        .def_readonly("ref_s", &ReportPoint::ref_s)
        .def_readonly("ref_i", &ReportPoint::ref_i)
        .def_readonly("ref_r", &ReportPoint::ref_r)
        .def_readonly("z_s", &ReportPoint::z_s)
        .def_readonly("z_i", &ReportPoint::z_i)
        .def_readonly("z_r", &ReportPoint::z_r);

    py::class_<EnsembleReport>(m, "EnsembleReport")
        .def_readonly("n_replicates", &EnsembleReport::n_replicates)
        .def_readonly("master_seed", &EnsembleReport::master_seed)
        .def_readonly("points", &EnsembleReport::points)
        .def_readonly("coverage_s", &EnsembleReport::coverage_s)
        .def_readonly("coverage_i", &EnsembleReport::coverage_i)
        .def_readonly("coverage_r", &EnsembleReport::coverage_r)
        .def_readonly("total_clamp_events", &EnsembleReport::total_clamp_events)
        .def_readonly("z_threshold", &EnsembleReport::z_threshold)
        .def_readonly("coverage_threshold", &EnsembleReport::coverage_threshold)
        .def_readonly("passed", &EnsembleReport::pass);

    m.def("equivalence_report", &equivalence_report, py::arg("ensemble"), py::arg("reference"),
          py::arg("z_threshold") = 3.0, py::arg("coverage_threshold") = 0.95);

    py::class_<FailureModeSpec>(m, "FailureModeSpec")
        .def(py::init([](std::size_t side, double stay_prob, SirParams reference,
                         double alpha_prime, double beta_prime, std::size_t n_replicates,
                         std::uint64_t master_seed) {
                 FailureModeSpec spec;
                 spec.side = side;
                 spec.stay_prob = stay_prob;
                 spec.reference = reference;
                 spec.alpha_prime = alpha_prime;
                 spec.beta_prime = beta_prime;
                 spec.n_replicates = n_replicates;
                 spec.master_seed = master_seed;
                 return spec;
             }),
             py::arg("side"), py::arg("stay_prob"), py::arg("reference"),
             py::arg("alpha_prime"), py::arg("beta_prime"), py::arg("n_replicates") = 200,
             py::arg("master_seed") = 0);

    py::class_<FailureModeResult>(m, "FailureModeResult")
        .def_readonly("report", &FailureModeResult::report)
        .def_readonly("peak_mean_i", &FailureModeResult::peak_mean_i)
        .def_readonly("final_mean_r", &FailureModeResult::final_mean_r);

    m.def("failure_mode_experiment", &failure_mode_experiment, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
}
