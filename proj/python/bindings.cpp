#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsep/bloch.hpp"
#include "qsep/oracles.hpp"
#include "qsep/suite.hpp"

namespace py = pybind11;
using namespace qsep;

namespace {

// JSON crosses the boundary as text; the python side parses it.
std::string dumps(const json& j) { return dump_json(j); }

CMat as_cmat(const Eigen::Ref<const CMat>& m) { return CMat(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Separability tests, convex oracles and protocol simulation";

  py::register_exception<Error>(m, "QsepError", PyExc_ValueError);

  m.def(
      "encode",
      [](const Eigen::Ref<const CMat>& rho) {
        const BlochVector r = encode(as_cmat(rho));
        return py::make_tuple(r.M, RVec(r.coords));
      },
      py::arg("rho"), "Bloch coordinates of a Hermitian matrix; returns (M, coords).");
  m.def(
      "decode", [](int M, const RVec& coords) { return decode(BlochVector::make(M, coords)); }, py::arg("M"),
      py::arg("coords"));
  m.def(
      "psd_check_recursion",
      [](const Eigen::Ref<const CMat>& h, double tol) { return psd_check_recursion(as_cmat(h), tol).psd; },
      py::arg("matrix"), py::arg("tol") = kRecursionTol);

  m.def(
      "ppt_check",
      [](const Eigen::Ref<const CMat>& rho, int dB, int dC) { return dumps(sep_result_to_json(ppt_check(as_cmat(rho), dB, dC))); },
      py::arg("rho"), py::arg("dB"), py::arg("dC"));
  m.def(
      "separability_test",
      [](const Eigen::Ref<const CMat>& rho, int dB, int dC, int level, double tol, bool ppt) {
        ExtensionOptions opt;
        opt.delta = tol;
        opt.ppt = ppt;
        py::gil_scoped_release release;
        return dumps(sep_result_to_json(separability_test(as_cmat(rho), dB, dC, level, opt)));
      },
      py::arg("rho"), py::arg("dB"), py::arg("dC"), py::arg("level") = 2, py::arg("tol") = 1e-6,
      py::arg("ppt") = true);

  m.def(
      "wval",
      [](const Eigen::Ref<const CMat>& V, const std::vector<int>& layout, double delta, double soundness,
         int max_iter) {
        const WvalInstance inst = build_wval_from_verifier(as_cmat(V), qubit_layout(layout), delta, soundness);
        WvalOptions opt;
        opt.max_iterations = max_iter;
        py::gil_scoped_release release;
        return dumps(wval_result_to_json(inst, wval_solve(inst, opt)));
      },
      py::arg("verifier"), py::arg("layout") = std::vector<int>{2, 2, 2}, py::arg("delta") = 0.1,
      py::arg("soundness") = 0.4, py::arg("max_iter") = 200000);

  m.def(
      "schedule", [](int kappa, double c_yes, double xi) { return dumps(schedule_to_json(schedule_compute(kappa, c_yes, xi))); },
      py::arg("kappa") = 2, py::arg("c_yes") = 0.9, py::arg("xi") = 0.1);
  m.def(
      "protocol_run",
      [](const std::string& csp, const std::string& proof, const std::string& schedule) {
        const CspInstance c = csp_from_json(parse_json(csp, "csp"));
        const ProtocolSchedule s = schedule_from_json(parse_json(schedule, "schedule"));
        const ProtocolState psi = protocol_state_from_json(parse_json(proof, "proof"), c.R, c.kappa);
        return dumps(outcome_to_json(protocol_accept_prob(psi, s, c)));
      },
      py::arg("csp"), py::arg("proof"), py::arg("schedule"));

  m.def(
      "swap_test_prob",
      [](const Eigen::Ref<const CMat>& a, const Eigen::Ref<const CMat>& b) { return swap_test_prob(as_cmat(a), as_cmat(b)); },
      py::arg("rho1"), py::arg("rho2"));
  m.def(
      "comp_basis_detector_prob", [](const CVec& mu, const CVec& nu) { return comp_basis_detector_prob(mu, nu); },
      py::arg("mu"), py::arg("nu"));

  m.def("suite_names", &suite_names);
  m.def(
      "lemmas_verify",
      [](const std::vector<std::string>& suites, int trials, std::uint64_t seed, int jobs) {
        SuiteOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        opt.jobs = jobs;
        py::gil_scoped_release release;
        return dumps(run_suites(suites, opt));
      },
      py::arg("suites") = std::vector<std::string>{"all"}, py::arg("trials") = 500, py::arg("seed") = 7,
      py::arg("jobs") = 1);
}
