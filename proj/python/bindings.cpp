// Copyright 2026 The liouvep Authors
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

#include <optional>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liouvep/evolve.hpp"
#include "liouvep/io.hpp"
#include "liouvep/models.hpp"
#include "liouvep/spectra.hpp"
#include "liouvep/trajectories.hpp"

namespace py = pybind11;
using namespace liouvep;

namespace {

ModelFamily preset_family(const std::string& name, double omega) {
  if (!io::is_preset(name)) throw std::invalid_argument("unknown preset: " + name);
  return [name, omega](double g) { return io::preset_model(name, omega, g); };
}

traj::DetectorSetup make_setup(std::optional<double> q, std::optional<double> eta) {
  if (q && eta) throw std::invalid_argument("give either q or eta, not both");
  if (eta) return traj::Inefficient{*eta};
  return traj::TwoDetector{q.value_or(1.0)};
}

py::dict ep_to_dict(const EpEstimate& e) {
  py::dict d;
  d["found"] = e.found;
  d["parameter_value"] = e.parameter_value;
  d["eigenvalue"] = e.eigenvalue_at_ep;
  d["order"] = e.order;
  d["gap"] = e.gap_at_ep;
  d["overlap"] = e.overlap_at_ep;
  d["coalescing_branches"] = e.coalescing_branches;
  d["spectral_scale"] = e.spectral_scale;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid-Liouvillian spectra, exceptional points and postselected trajectories";
  m.attr("__version__") = LIOUVEP_VERSION;

  py::register_exception<traj::EmptyPostselectionError>(m, "EmptyPostselectionError");
  py::register_exception<TraceUnderflowError>(m, "TraceUnderflowError");
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError");

  m.def("sigma_x", &sigma_x);
  m.def("sigma_y", &sigma_y);
  m.def("sigma_z", &sigma_z);
  m.def("sigma_minus", &sigma_minus);
  m.def("sigma_plus", &sigma_plus);
  m.def("qubit_state", [](double theta, double phi) { return qubit_state({theta, phi}); },
        py::arg("theta"), py::arg("phi"));

  py::class_<LindbladModel>(m, "LindbladModel")
      .def(py::init([](const ComplexMatrix& h,
                       const std::vector<std::tuple<ComplexMatrix, double, double>>& channels) {
             std::vector<JumpChannel> cs;
             for (const auto& [op, rate, weight] : channels) cs.push_back({op, rate, weight});
             return LindbladModel(h, cs);
           }),
           py::arg("hamiltonian"), py::arg("channels"),
           "channels: list of (operator, rate, jump_weight)")
      .def_static("preset", &io::preset_model, py::arg("name"), py::arg("omega"), py::arg("gamma"))
      .def_static(
          "from_json",
          [](const std::string& text) { return io::model_from_json(io::Json::parse(text)); },
          py::arg("text"))
      .def("to_json", [](const LindbladModel& mdl) { return io::model_to_json(mdl).dump(); })
      .def_property_readonly("dim", &LindbladModel::dim)
      .def_property_readonly("hamiltonian", &LindbladModel::hamiltonian);

  m.def("liouvillian", [](const LindbladModel& mdl) { return liouvillian(mdl).matrix; });
  m.def("effective_hamiltonian", &effective_hamiltonian);
  m.def(
      "hybrid_liouvillian",
      [](const LindbladModel& mdl, double q) { return hybrid_liouvillian(mdl, q).matrix; },
      py::arg("model"), py::arg("q"));

  m.def(
      "spectrum",
      [](const LindbladModel& mdl, double q) {
        const SpectralDecomposition d = decompose(hybrid_liouvillian(mdl, q));
        return py::make_tuple(d.eigenvalues, d.eigenmatrices, d.residuals);
      },
      py::arg("model"), py::arg("q"),
      "Eigenvalues, eigenmatrices and residuals of the hybrid generator in spectral order.");

  m.def(
      "locate_ep",
      [](const std::string& preset, double omega, double q, std::pair<double, double> bracket) {
        return ep_to_dict(locate_ep(preset_family(preset, omega), q, bracket));
      },
      py::arg("preset"), py::arg("omega"), py::arg("q"), py::arg("bracket"));

  m.def(
      "jordan_block_size",
      [](const LindbladModel& mdl, double q, Complex lambda) {
        return jordan_block_size(hybrid_liouvillian(mdl, q), lambda);
      },
      py::arg("model"), py::arg("q"), py::arg("eigenvalue"));

  m.def(
      "jordan_chain",
      [](const LindbladModel& mdl, double q, Complex lambda, const ComplexMatrix& rho) {
        const JordanChainResult j = jordan_chain(hybrid_liouvillian(mdl, q), lambda, rho);
        return py::make_tuple(j.generalized_eigenmatrix, j.residual, j.consistent);
      },
      py::arg("model"), py::arg("q"), py::arg("eigenvalue"), py::arg("eigenmatrix"));

  m.def(
      "propagate",
      [](const LindbladModel& mdl, double q, const ComplexMatrix& rho0,
         const std::vector<double>& times) {
        const EvolutionResult r = propagate(hybrid_liouvillian(mdl, q), rho0, times);
        return py::make_tuple(r.states, r.raw_traces);
      },
      py::arg("model"), py::arg("q"), py::arg("rho0"), py::arg("times"),
      "Normalized states and raw traces at each time.");
  m.def("expectation", &expectation, py::arg("rho"), py::arg("observable"));

  m.def(
      "run_trajectories",
      [](const LindbladModel& mdl, const ComplexVector& psi0, std::vector<double> sample_times,
         std::size_t n_traj, std::uint64_t seed, std::optional<double> q,
         std::optional<double> eta, double dt, unsigned threads) {
        traj::TrajectoryConfig cfg;
        cfg.sample_times = std::move(sample_times);
        if (cfg.sample_times.empty()) throw std::invalid_argument("sample_times is empty");
        cfg.t_max = cfg.sample_times.back();
        cfg.n_traj = n_traj;
        cfg.master_seed = seed;
        cfg.dt = dt > 0.0 ? dt : traj::default_dt(mdl, 1.0);
        cfg.threads = threads;
        const auto r = traj::run_ensemble(mdl, make_setup(q, eta), cfg, psi0,
                                          traj::pauli_observables());
        py::dict d;
        d["times"] = r.stats.times;
        d["observables"] = r.stats.observables;
        d["mean"] = r.stats.mean;
        d["sem"] = r.stats.sem;
        d["n_accepted"] = r.stats.n_accepted;
        d["n_total"] = r.stats.n_total;
        d["empty_postselection"] = r.empty_postselection;
        d["effective_dt"] = r.effective_dt;
        return d;
      },
      py::arg("model"), py::arg("psi0"), py::arg("sample_times"), py::arg("n_traj") = 1000,
      py::arg("seed") = 0, py::arg("q") = py::none(), py::arg("eta") = py::none(),
      py::arg("dt") = 0.0, py::arg("threads") = 1,
      "Postselected Pauli averages. Give q for two detectors or eta for one inefficient detector.");

  m.def("example1_ep", &models::example1_ep, py::arg("q"), py::arg("omega") = 1.0);
  m.def("example2_hybrid_ep", &models::example2_hybrid_ep, py::arg("q"), py::arg("omega") = 1.0);
}
