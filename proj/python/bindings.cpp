#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "mzfid/mzfid.hpp"

namespace py = pybind11;
using namespace mzfid;

namespace {

py::array_t<double> table_values(const LikelihoodTable& t) {
  py::array_t<double> out({t.rows(), t.columns()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t k = 0; k < t.columns(); ++k) view(r, k) = t(r, k);
  }
  return out;
}

py::array_t<double> grid_points(const PhaseGrid& grid) {
  const auto pts = grid.points();
  return py::array_t<double>(static_cast<py::ssize_t>(pts.size()), pts.data());
}

StateCoefficients state_from_sequence(const std::vector<Complex>& coeffs, const std::string& label) {
  return StateCoefficients(coeffs, label);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mach-Zehnder interferometer fidelity: likelihoods, posteriors, mutual information, optimization";

  py::register_exception<ImpossibleOutcome>(m, "ImpossibleOutcome", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  // --- optics -------------------------------------------------------------
  py::class_<InterferometerGeometry>(m, "InterferometerGeometry")
      .def(py::init<>())
      .def(py::init([](double kl1, double kl2) { return InterferometerGeometry{kl1, kl2}; }), py::arg("kl1"),
           py::arg("kl2"))
      .def_readwrite("kl1", &InterferometerGeometry::kl1)
      .def_readwrite("kl2", &InterferometerGeometry::kl2);

  py::class_<Outcome>(m, "Outcome")
      .def(py::init([](int n_c, int n_d) { return Outcome{n_c, n_d}; }), py::arg("n_c"), py::arg("n_d"))
      .def_readwrite("n_c", &Outcome::n_c)
      .def_readwrite("n_d", &Outcome::n_d)
      .def("__eq__", [](const Outcome& a, const Outcome& b) { return a == b; })
      .def("__repr__", [](const Outcome& o) {
        return "Outcome(" + std::to_string(o.n_c) + ", " + std::to_string(o.n_d) + ")";
      });

  py::class_<StateCoefficients>(m, "StateCoefficients")
      .def(py::init(&state_from_sequence), py::arg("coeffs"), py::arg("label") = "custom")
      .def_static("fock", &StateCoefficients::fock, py::arg("photons"))
      .def_static("noon", &StateCoefficients::noon, py::arg("photons"))
      .def_property_readonly("photons", &StateCoefficients::photons)
      .def_property_readonly("label", &StateCoefficients::label)
      .def_property_readonly("coeffs", [](const StateCoefficients& s) {
        return std::vector<Complex>(s.coeffs().begin(), s.coeffs().end());
      });

  m.def(
      "build_scattering_matrix",
      [](double phi, const InterferometerGeometry& g) {
        const auto s = build_scattering_matrix(phi, g);
        return std::vector<std::vector<Complex>>{{s(0, 0), s(0, 1)}, {s(1, 0), s(1, 1)}};
      },
      py::arg("phi"), py::arg("geometry") = InterferometerGeometry{}, "2x2 scattering matrix as nested lists");
  m.def("fock_outcome_prob", &fock_outcome_prob, py::arg("photons"), py::arg("outcome"), py::arg("phi"));
  m.def("noon_outcome_prob", &noon_outcome_prob, py::arg("photons"), py::arg("outcome"), py::arg("phi"));
  m.def(
      "transition_amplitude",
      [](double phi, int n_a, int n_b, int n_c, int n_d, const InterferometerGeometry& g) {
        return transition_amplitude(build_scattering_matrix(phi, g), n_a, n_b, n_c, n_d);
      },
      py::arg("phi"), py::arg("n_a"), py::arg("n_b"), py::arg("n_c"), py::arg("n_d"),
      py::arg("geometry") = InterferometerGeometry{});
  m.def("state_output_probs", &state_output_probs, py::arg("state"), py::arg("phi"),
        py::arg("geometry") = InterferometerGeometry{}, "P(n_c, N - n_c | phi) for n_c = 0..N");
  m.def("state_outcome_prob", &state_outcome_prob, py::arg("state"), py::arg("phi"), py::arg("geometry"),
        py::arg("outcome"));

  py::class_<LikelihoodTable>(m, "LikelihoodTable")
      .def_property_readonly("values", &table_values)
      .def_property_readonly("phi", [](const LikelihoodTable& t) { return grid_points(t.grid()); })
      .def_property_readonly("outcomes", &LikelihoodTable::outcomes)
      .def_property_readonly("label", &LikelihoodTable::label)
      .def_property_readonly("photons", &LikelihoodTable::photons)
      .def("normalization_defect", &LikelihoodTable::normalization_defect);
  m.def("likelihood_table",
        py::overload_cast<const StateCoefficients&, const InterferometerGeometry&, std::size_t>(&likelihood_table),
        py::arg("state"), py::arg("geometry") = InterferometerGeometry{}, py::arg("grid_size") = kDefaultGridSize);

  // --- bayes --------------------------------------------------------------
  py::class_<Peak>(m, "Peak").def_readonly("phi", &Peak::phi).def_readonly("height", &Peak::height);

  py::class_<PhasePosterior>(m, "PhasePosterior")
      .def_property_readonly("phi", [](const PhasePosterior& p) { return grid_points(p.grid); })
      .def_property_readonly("density", [](const PhasePosterior& p) {
        return py::array_t<double>(static_cast<py::ssize_t>(p.density.size()), p.density.data());
      })
      .def_readonly("outcome", &PhasePosterior::outcome)
      .def_readonly("peaks", &PhasePosterior::peaks)
      .def("total_mass", &PhasePosterior::total_mass);
  m.def("posterior_density", py::overload_cast<const LikelihoodTable&, Outcome>(&posterior_density),
        py::arg("table"), py::arg("outcome"));
  m.def(
      "count_peaks", [](PhasePosterior& p, double threshold) { return count_peaks(p, threshold); },
      py::arg("posterior"), py::arg("relative_threshold") = kPeakThreshold);

  py::class_<CircularSummary>(m, "CircularSummary")
      .def_readonly("mean", &CircularSummary::mean)
      .def_readonly("stddev", &CircularSummary::stddev)
      .def_readonly("resultant_length", &CircularSummary::resultant_length);
  m.def("circular_summary", &circular_summary, py::arg("posterior"));

  py::class_<MeasurementRecord>(m, "MeasurementRecord")
      .def_readonly("true_phase", &MeasurementRecord::true_phase)
      .def_readonly("seed", &MeasurementRecord::seed)
      .def_readonly("outcomes", &MeasurementRecord::outcomes);
  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("record", &SimulationResult::record)
      .def_readonly("final_posterior", &SimulationResult::final_posterior);
  m.def(
      "simulate_sequence",
      [](const StateCoefficients& state, double true_phase, std::size_t shots, std::uint64_t seed,
         const InterferometerGeometry& g, std::size_t grid) {
        py::gil_scoped_release release;
        return simulate_sequence(state, g, true_phase, shots, seed, grid);
      },
      py::arg("state"), py::arg("true_phase"), py::arg("shots"), py::arg("seed"),
      py::arg("geometry") = InterferometerGeometry{}, py::arg("grid_size") = kDefaultGridSize);

  // --- fidelity -----------------------------------------------------------
  py::class_<FidelityReport>(m, "FidelityReport")
      .def_readonly("h_bits", &FidelityReport::h_bits)
      .def_readonly("state_label", &FidelityReport::state_label)
      .def_readonly("photons", &FidelityReport::photons)
      .def_readonly("grid_size", &FidelityReport::grid_size)
      .def_readonly("outcome_count", &FidelityReport::outcome_count);
  m.def("mutual_information", &mutual_information, py::arg("table"));
  m.def(
      "fidelity_sweep",
      [](const std::string& family, int n_max, std::size_t grid) { return fidelity_sweep(family, n_max, grid); },
      py::arg("family"), py::arg("n_max"), py::arg("grid_size") = kDefaultGridSize);
  m.def("repeated_mutual_information", &repeated_mutual_information, py::arg("single_shot"), py::arg("repeats"),
        py::arg("cap") = kDefaultCountVectorCap);

  py::class_<SensitivityEstimate>(m, "SensitivityEstimate")
      .def_readonly("delta_phi", &SensitivityEstimate::delta_phi)
      .def_readonly("delta_m", &SensitivityEstimate::delta_m)
      .def_readonly("slope", &SensitivityEstimate::slope)
      .def_readonly("mean", &SensitivityEstimate::mean)
      .def_readonly("working_point", &SensitivityEstimate::working_point);
  m.def(
      "error_propagation_sensitivity",
      [](const StateCoefficients& state, const std::string& observable, double working_point,
         const InterferometerGeometry& g) {
        return error_propagation_sensitivity(state, g, parse_observable(observable), working_point);
      },
      py::arg("state"), py::arg("observable"), py::arg("working_point"),
      py::arg("geometry") = InterferometerGeometry{});
  m.def("standard_limit", &standard_limit, py::arg("photons"));
  m.def("heisenberg_limit", &heisenberg_limit, py::arg("photons"));

  // --- optimizer ----------------------------------------------------------
  m.def(
      "project_normalize",
      [](const std::vector<Complex>& raw, const std::string& label) { return project_normalize(raw, label); },
      py::arg("raw"), py::arg("label") = "custom");

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("restarts", &OptimizerConfig::restarts)
      .def_readwrite("max_iterations", &OptimizerConfig::max_iterations)
      .def_readwrite("tolerance", &OptimizerConfig::tolerance)
      .def_readwrite("seed", &OptimizerConfig::seed)
      .def_readwrite("search_grid", &OptimizerConfig::search_grid)
      .def_readwrite("report_grid", &OptimizerConfig::report_grid)
      .def_readwrite("geometry", &OptimizerConfig::geometry);
  py::class_<RestartSummary>(m, "RestartSummary")
      .def_readonly("index", &RestartSummary::index)
      .def_readonly("start", &RestartSummary::start)
      .def_readonly("best_h", &RestartSummary::best_h)
      .def_readonly("iterations", &RestartSummary::iterations)
      .def_readonly("evaluations", &RestartSummary::evaluations)
      .def_readonly("converged", &RestartSummary::converged);
  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("best_state", &OptimizationResult::best_state)
      .def_readonly("best_h", &OptimizationResult::best_h)
      .def_readonly("search_h", &OptimizationResult::search_h)
      .def_readonly("best_restart", &OptimizationResult::best_restart)
      .def_readonly("history", &OptimizationResult::history)
      .def_readonly("evaluations", &OptimizationResult::evaluations);
  m.def(
      "optimize_input_state",
      [](int photons, const OptimizerConfig& config) {
        py::gil_scoped_release release;
        return optimize_input_state(photons, config);
      },
      py::arg("photons"), py::arg("config") = OptimizerConfig{});

#ifdef MZFID_VERSION
  m.attr("__version__") = MZFID_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
