#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffent/agreement.hpp"
#include "diffent/diffraction.hpp"
#include "diffent/entanglement.hpp"
#include "diffent/error.hpp"
#include "diffent/fock.hpp"
#include "diffent/io.hpp"
#include "diffent/protocols.hpp"
#include "diffent/separability.hpp"

namespace py = pybind11;
using namespace diffent;

namespace {

std::vector<ModeDescriptor> descriptors(const std::string& text) { return io::parse_descriptors(text); }

MultimodeFockState state_from_dict(int modes, const std::map<Occupation, cd>& amplitudes) {
  MultimodeFockState s(modes);
  for (const auto& [occ, a] : amplitudes) s.set(occ, a);
  return s;
}

py::dict verdict_dict(const SeparabilityVerdict& v) {
  py::dict d;
  d["separable"] = v.separable;
  d["coupled_modes"] = v.coupled_modes;
  if (v.witness) {
    py::dict w;
    w["order"] = v.witness->order;
    w["input_mode"] = v.witness->input_mode;
    w["output_mode"] = v.witness->output_mode;
    w["other_output_mode"] = v.witness->other_output_mode;
    w["residual"] = v.witness->residual;
    w["description"] = v.witness->description;
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diffraction-compiled linear optics and entanglement tools";
  m.attr("__version__") = DIFFENT_VERSION;

  py::register_exception<Error>(m, "DiffentError", PyExc_RuntimeError);

  py::class_<MultimodeFockState>(m, "FockState")
      .def(py::init(&state_from_dict), py::arg("modes"), py::arg("amplitudes"))
      .def_static("basis", &MultimodeFockState::basis)
      .def_property_readonly("mode_count", &MultimodeFockState::mode_count)
      .def_property_readonly("truncation_error", &MultimodeFockState::truncation_error)
      .def("amplitudes",
           [](const MultimodeFockState& s) {
             return std::map<Occupation, cd>(s.amplitudes().begin(), s.amplitudes().end());
           })
      .def("amplitude", &MultimodeFockState::amplitude)
      .def("squared_norm", &MultimodeFockState::squared_norm)
      .def("__len__", &MultimodeFockState::support_size);

  m.def("grating_unitary",
        [](double ux, double uy, double k) {
          return compile_grating_block(MaskFunction::cosine_grating(ux, uy, k)).unitary.matrix();
        },
        py::arg("ux") = 0.6, py::arg("uy") = 0.0, py::arg("k") = 2.0 * kPi,
        "Completed 2 x 2 network of a cosine grating (row = input mode).");
  m.def("splitter", [](double theta, double phi) { return su2_splitter(theta, phi).matrix(); },
        py::arg("theta"), py::arg("phi") = 0.0);
  m.def("unitarize",
        [](const MatrixXcd& coupling, const std::string& mode) {
          if (mode != "flux" && mode != "polar") {
            throw Error(ErrorCode::InvalidArgument, "mode must be 'flux' or 'polar'");
          }
          return unitarize(CouplingMatrix(coupling),
                           mode == "flux" ? UnitarizeMode::FluxFaithful : UnitarizeMode::Polar)
              .matrix();
        },
        py::arg("coupling"), py::arg("mode") = "flux",
        "Unitary (row = input) from a coupling matrix (row = output).");
  m.def("jinc", &jinc);

  m.def("input_state",
        [](const std::string& text, int cutoff, int photon_cap, double tol) {
          return build_input_state({descriptors(text), cutoff, photon_cap, tol});
        },
        py::arg("descriptors"), py::arg("cutoff") = 0, py::arg("photon_cap") = -1,
        py::arg("truncation_tolerance") = kDefaultTruncationTolerance);
  m.def("propagate",
        [](const MultimodeFockState& s, const MatrixXcd& u, bool factored) {
          const UnitaryMatrix w(u);
          return factored ? apply_unitary_factored(s, w) : apply_unitary(s, w);
        },
        py::arg("state"), py::arg("unitary"), py::arg("factored") = false);
  m.def("entropy",
        [](const MultimodeFockState& s, const std::vector<int>& subset) {
          return entanglement_entropy(s, Bipartition(subset, s.mode_count()));
        },
        py::arg("state"), py::arg("subset"), "Entanglement entropy in bits of subset vs the rest.");
  m.def("check_separability",
        [](const std::string& text, const MatrixXcd& u, const std::vector<int>& subset) {
          return verdict_dict(
              check_no_entanglement(BargmannInput::from_descriptors(descriptors(text)), UnitaryMatrix(u), subset));
        },
        py::arg("descriptors"), py::arg("unitary"), py::arg("subset"));

  m.def("hom_coincidence", [](const MatrixXcd& u) { return hom_coincidence(UnitaryMatrix(u)); });
  m.def("ifm",
        [](double eta, const MatrixXcd& u) {
          const IfmResult r = ifm_project(eta, UnitaryMatrix(u));
          py::dict d;
          d["atoms"] = std::vector<cd>(r.atoms.amplitudes.begin(), r.atoms.amplitudes.end());
          d["bell_fidelity"] = r.atoms.bell_fidelity();
          d["null_probability"] = r.null_probability;
          d["detected_probability"] = r.detected_probability;
          return d;
        },
        py::arg("eta"), py::arg("unitary"));
  m.def("noon_scan",
        [](int photons, int theta_steps, int phi_steps, bool refine) {
          const ScanResult r = noon_fidelity_scan(photons, {theta_steps, phi_steps, refine, false});
          py::dict d;
          d["best_fidelity"] = r.best_fidelity;
          d["grid_best_fidelity"] = r.grid_best_fidelity;
          d["best_m"] = r.best_m;
          d["best_theta"] = r.best_theta;
          d["best_phi"] = r.best_phi;
          return d;
        },
        py::arg("photons"), py::arg("theta_steps") = 256, py::arg("phi_steps") = 256,
        py::arg("refine") = true);
  m.def("agreement_suite",
        [](int trials, std::uint64_t seed) {
          const AgreementSummary s = run_agreement_suite(trials, seed);
          py::dict d;
          d["trials"] = static_cast<int>(s.trials.size());
          d["agreements"] = s.agreements;
          d["gaussian_trials"] = s.gaussian_trials;
          return d;
        },
        py::arg("trials") = 100, py::arg("seed") = 1);
}
