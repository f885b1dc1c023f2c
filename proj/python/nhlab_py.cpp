#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <tuple>

#include "nhlab/cli.hpp"
#include "nhlab/errors.hpp"
#include "nhlab/models.hpp"
#include "nhlab/netgraph.hpp"
#include "nhlab/network_io.hpp"
#include "nhlab/reduce.hpp"
#include "nhlab/scatter.hpp"
#include "nhlab/spectra.hpp"
#include "nhlab/susy.hpp"

namespace py = pybind11;
using namespace nhlab;

namespace {

TightBindingNetwork make_network(int n, const std::vector<std::tuple<int, int, double>>& hops,
                                 const std::vector<std::pair<int, double>>& pots) {
  std::vector<Hopping> h;
  for (const auto& [i, j, t] : hops) h.push_back({i, j, t});
  std::vector<SitePotential> p;
  for (const auto& [i, v] : pots) p.push_back({i, v});
  return build_network(n, std::move(h), std::move(p));
}

}  // namespace

PYBIND11_MODULE(_nhlab, m) {
  m.doc() = "Two-lead scattering on tight-binding networks and its non-Hermitian reduction";

  // Kept alive for the lifetime of the interpreter.
  static PyObject* error_type = PyErr_NewException("nhlab.NhlabError", PyExc_ValueError, nullptr);
  m.attr("NhlabError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(error_type)(e.what());
      inst.attr("code") = error_name(e.code());
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  // netgraph
  py::class_<TightBindingNetwork>(m, "Network")
      .def_property_readonly("n_sites", &TightBindingNetwork::n_sites)
      .def_property_readonly("potentials", &TightBindingNetwork::potentials)
      .def_property_readonly("hoppings",
                             [](const TightBindingNetwork& n) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const auto& h : n.hoppings()) out.emplace_back(h.i, h.j, h.amplitude);
                               return out;
                             })
      .def("relabeled", [](const TightBindingNetwork& n, const std::vector<int>& perm) {
        return n.relabeled(perm);
      })
      .def(py::self == py::self);
  m.def("build_network", &make_network, py::arg("n_sites"), py::arg("hoppings"),
        py::arg("potentials") = std::vector<std::pair<int, double>>{});
  m.def("uniform_ring", &uniform_ring, py::arg("n_sites"), py::arg("t") = 1.0);
  m.def("center_matrix", &center_matrix);

  py::class_<LeadConfig>(m, "LeadConfig")
      .def(py::init([](int a, int b, double ga, double gb, double J) {
             return LeadConfig{a, b, ga, gb, J};
           }),
           py::arg("site_a"), py::arg("site_b"), py::arg("g_a") = 1.0, py::arg("g_b") = 1.0,
           py::arg("J") = 1.0)
      .def_readwrite("site_a", &LeadConfig::site_a)
      .def_readwrite("site_b", &LeadConfig::site_b)
      .def_readwrite("g_a", &LeadConfig::g_a)
      .def_readwrite("g_b", &LeadConfig::g_b)
      .def_readwrite("J", &LeadConfig::J);

  py::class_<ScatteringSystem>(m, "ScatteringSystem")
      .def_property_readonly("network", &ScatteringSystem::network)
      .def_property_readonly("leads", &ScatteringSystem::leads)
      .def_property_readonly("n_sites", &ScatteringSystem::n_sites)
      .def(py::self == py::self);
  m.def("attach_leads", &attach_leads);
  m.def("swap_leads", &swap_leads);
  m.def("parse_network", [](const std::string& text) { return parse_network(text); });
  m.def("load_network", [](const std::string& path) { return load_network(path); });
  m.def("serialize_network", &serialize_network);

  // scatter
  py::class_<ScatteringSolution>(m, "ScatteringSolution")
      .def_property_readonly("k", [](const ScatteringSolution& s) { return s.k.k; })
      .def_property_readonly("reversed", [](const ScatteringSolution& s) { return s.k.reversed; })
      .def_readonly("energy", &ScatteringSolution::energy)
      .def_readonly("r", &ScatteringSolution::r)
      .def_readonly("t", &ScatteringSolution::t)
      .def_readonly("h", &ScatteringSolution::h)
      .def_readonly("vanishing_joint", &ScatteringSolution::vanishing_joint)
      .def_readonly("decoupled_states", &ScatteringSolution::decoupled_states)
      .def_property_readonly("reflection_phase", &ScatteringSolution::reflection_phase)
      .def_property_readonly("reflectance", &ScatteringSolution::reflectance)
      .def_property_readonly("transmittance", &ScatteringSolution::transmittance);
  m.def("solve_scattering",
        [](const ScatteringSystem& s, double k) { return solve_scattering(s, k); });
  m.def("time_reversed", &time_reversed);

  // reduce
  py::class_<EffectivePotentials>(m, "EffectivePotentials")
      .def(py::init([](cplx a, cplx b) { return EffectivePotentials{a, b}; }), py::arg("u_a"),
           py::arg("u_b"))
      .def_readonly("u_a", &EffectivePotentials::u_a)
      .def_readonly("u_b", &EffectivePotentials::u_b);
  py::class_<EffectiveHamiltonian>(m, "EffectiveHamiltonian")
      .def_readonly("matrix", &EffectiveHamiltonian::matrix)
      .def_readonly("site_a", &EffectiveHamiltonian::site_a)
      .def_readonly("site_b", &EffectiveHamiltonian::site_b)
      .def_readonly("potentials", &EffectiveHamiltonian::potentials);
  py::class_<ReductionReport>(m, "ReductionReport")
      .def_readonly("energy", &ReductionReport::energy)
      .def_readonly("eigen_residual", &ReductionReport::eigen_residual)
      .def_readonly("gain_loss_product", &ReductionReport::gain_loss_product)
      .def_readonly("matched", &ReductionReport::matched);
  py::class_<GainLoss>(m, "GainLoss")
      .def_readonly("product", &GainLoss::product)
      .def_readonly("closed_form", &GainLoss::closed_form);
  m.def("effective_potentials", &effective_potentials);
  m.def("effective_hamiltonian", &effective_hamiltonian);
  m.def("verify_reduction", &verify_reduction, py::arg("h_eff"), py::arg("solution"),
        py::arg("tol") = kDefaultTolerance);
  m.def("gain_loss_sign", &gain_loss_sign);

  // spectra
  py::enum_<PtPhase>(m, "PtPhase")
      .value("unbroken", PtPhase::unbroken)
      .value("broken", PtPhase::broken)
      .value("not_pt", PtPhase::not_pt);
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("eigenvectors", &Spectrum::eigenvectors)
      .def_readonly("residuals", &Spectrum::residuals)
      .def_readonly("conjugate_pairs", &Spectrum::conjugate_pairs)
      .def_readonly("clusters", &Spectrum::clusters)
      .def_readonly("scale", &Spectrum::scale);
  py::class_<CoalescenceGroup>(m, "CoalescenceGroup")
      .def_readonly("members", &CoalescenceGroup::members)
      .def_readonly("eigenvalue", &CoalescenceGroup::eigenvalue)
      .def_readonly("min_overlap", &CoalescenceGroup::min_overlap);
  py::class_<CoalescenceReport>(m, "CoalescenceReport")
      .def_readonly("groups", &CoalescenceReport::groups)
      .def_readonly("self_overlaps", &CoalescenceReport::self_overlaps);
  m.def("eigendecompose", [](const Matrix& a) { return eigendecompose(a); });
  m.def("bilinear_self_overlap", &bilinear_self_overlap);
  m.def("pt_check", &pt_check);
  m.def("find_parity", &find_parity);
  m.def("classify_phase", &classify_phase, py::arg("spectrum"), py::arg("tol") = 1e-8);
  m.def("detect_coalescence", &detect_coalescence, py::arg("spectrum"), py::arg("tol") = 1e-8,
        py::arg("overlap_tol") = 1e-6);

  // models
  py::class_<RingSpec>(m, "RingSpec")
      .def_static("resonant", &RingSpec::resonant, py::arg("N"), py::arg("g"), py::arg("n"),
                  py::arg("J") = 1.0)
      .def_static("critical", &RingSpec::critical, py::arg("N"), py::arg("eps"), py::arg("J") = 1.0)
      .def_static("bare", &RingSpec::bare, py::arg("N"), py::arg("theta"), py::arg("J") = 1.0)
      .def_property_readonly("N", &RingSpec::N)
      .def_property_readonly("g", &RingSpec::g)
      .def_property_readonly("J", &RingSpec::J)
      .def_property_readonly("incident_k", &RingSpec::incident_k)
      .def_property_readonly("incident_energy", &RingSpec::incident_energy);
  m.def("build_ring_system", &build_ring_system);
  m.def("gamma_value", &gamma_value);
  m.def("pt_ring_hamiltonian", &pt_ring_hamiltonian, py::arg("N"), py::arg("gamma"),
        py::arg("J") = 1.0);
  m.def("ring_parity", &ring_parity);
  m.def("analytic_spectrum",
        [](int N, double gamma, double J) { return analytic_spectrum(N, gamma, J).multiset(); },
        py::arg("N"), py::arg("gamma"), py::arg("J") = 1.0);
  m.def("nonpt_potentials", &nonpt_potentials, py::arg("N"), py::arg("theta"), py::arg("J") = 1.0);
  m.def("verify_det_zero", &verify_det_zero, py::arg("N"), py::arg("theta"), py::arg("J") = 1.0);

  // susy
  py::class_<KappaMode>(m, "KappaMode")
      .def_static("real", &KappaMode::real)
      .def_static("bound", &KappaMode::bound)
      .def_static("broken", &KappaMode::broken)
      .def_property_readonly("kappa", &KappaMode::kappa)
      .def_property_readonly("mu", &KappaMode::mu);
  py::class_<LadderChain>(m, "LadderChain")
      .def_readonly("H1", &LadderChain::H1)
      .def_readonly("H2", &LadderChain::H2)
      .def_readonly("H2_prime", &LadderChain::H2_prime)
      .def_readonly("H3", &LadderChain::H3);
  py::class_<Eigenfunction>(m, "Eigenfunction")
      .def_readonly("label", &Eigenfunction::label)
      .def_readonly("eigenvalue", &Eigenfunction::eigenvalue)
      .def_readonly("vector", &Eigenfunction::vector)
      .def_readonly("residual", &Eigenfunction::residual);
  py::class_<ResonanceCoalescence>(m, "ResonanceCoalescence")
      .def_readonly("groups", &ResonanceCoalescence::groups)
      .def_readonly("deviations", &ResonanceCoalescence::deviations)
      .def_readonly("self_overlaps", &ResonanceCoalescence::self_overlaps)
      .def_readonly("triple", &ResonanceCoalescence::triple)
      .def("coalesced", &ResonanceCoalescence::coalesced, py::arg("tol") = 1e-10);
  m.def("build_ladder", &build_ladder);
  m.def("eigenfunctions", &eigenfunctions);
  m.def("coalescence_at_resonance", &coalescence_at_resonance);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return std::make_tuple(code, out.str(), err.str());
  }, "Run the command-line front end; returns (exit_code, stdout, stderr).");
}
