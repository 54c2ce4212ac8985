#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcap/capacity.hpp"
#include "qcap/channel_io.hpp"
#include "qcap/channels.hpp"
#include "qcap/cloners.hpp"
#include "qcap/degradability.hpp"
#include "qcap/errors.hpp"
#include "qcap/unruh.hpp"

namespace py = pybind11;
using namespace qcap;

namespace {

KrausChannel channel_from_ops(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) throw ValidationError("at least one Kraus operator is required");
  const Index dout = ops.front().rows(), din = ops.front().cols();
  return KrausChannel(din, dout, std::move(ops));
}

py::dict verdict_dict(const DegradabilityVerdict& v) {
  py::dict d;
  d["mode"] = to_string(v.mode);
  d["holds"] = v.holds;
  d["residual"] = v.residual;
  d["min_eigenvalue"] = v.min_eigenvalue;
  d["iterations"] = v.iterations;
  d["converged"] = v.converged;
  d["inconsistent"] = v.inconsistent;
  d["witness"] = v.witness ? py::cast(v.witness->matrix()) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum capacities of cloning machines and the Unruh channel";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SingularConstructionError>(m, "SingularConstructionError", PyExc_ArithmeticError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // Channels are passed as lists of dout x din complex arrays.
  m.def("cloner_kraus", [](int n, int m_out) { return cloner_channel({n, m_out}).ops(); }, py::arg("n"),
        py::arg("m"));
  m.def("complementary_kraus", [](std::vector<ComplexMatrix> ops) { return complementary(channel_from_ops(std::move(ops))).ops(); },
        py::arg("kraus"));
  m.def("rank2_kraus", [](double a, double b) { return rank2_qubit_channel({a, b}).ops(); }, py::arg("alpha"),
        py::arg("beta"));
  m.def("choi", [](std::vector<ComplexMatrix> ops) { return kraus_to_choi(channel_from_ops(std::move(ops))).matrix(); },
        py::arg("kraus"), "Unnormalized Choi matrix, output factor first.");
  m.def("channel_to_json", [](std::vector<ComplexMatrix> ops) { return channel_to_json(channel_from_ops(std::move(ops))); },
        py::arg("kraus"));
  m.def("channel_from_json", [](const std::string& text) { return parse_channel_json(text).ops(); }, py::arg("text"));

  m.def(
      "coherent_information",
      [](std::vector<ComplexMatrix> ops, const ComplexMatrix& rho) {
        return coherent_information(channel_from_ops(std::move(ops)), DensityMatrix(rho));
      },
      py::arg("kraus"), py::arg("rho"), "H(B) - H(E) in bits.");
  m.def(
      "maximize_coherent_information",
      [](std::vector<ComplexMatrix> ops, bool covariant, int restarts, std::uint64_t seed) {
        MaximizeOptions o;
        o.covariant = covariant;
        o.restarts = restarts;
        o.seed = seed;
        const CoherentInfoResult r =
            maximize_coherent_information(kraus_to_stinespring(channel_from_ops(std::move(ops))), o);
        py::dict d;
        d["value"] = r.value;
        d["argmax_state"] = r.argmax_state.matrix();
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("kraus"), py::arg("covariant") = false, py::arg("restarts") = 20, py::arg("seed") = 20090917);

  m.def("cloner_capacity", [](int n, int m_out) { return cloner_capacity_closed_form({n, m_out}); }, py::arg("n"),
        py::arg("m"));
  m.def("alpha_coefficients", [](int n, int m_out) { return alpha_coefficients<double>({n, m_out}); }, py::arg("n"),
        py::arg("m"));
  m.def("beta_coefficients", [](int n, int m_out) { return beta_coefficients<double>({n, m_out}); }, py::arg("n"),
        py::arg("m"));
  m.def(
      "clone_marginal", [](int n, int m_out, const ComplexVector& psi) { return clone_marginal({n, m_out}, psi).matrix(); },
      py::arg("n"), py::arg("m"), py::arg("psi"));
  m.def(
      "degrading_map_1to2",
      [](double shrink) {
        const DegradingMapSpectrum d = degrading_map_1to2(shrink);
        return py::make_tuple(d.choi, d.eigenvalues);
      },
      py::arg("shrink"), "Jamiolkowski matrix and its spectrum.");

  m.def(
      "classify",
      [](std::vector<ComplexMatrix> ops, std::vector<std::string> modes, double residual_tol, int max_iters) {
        std::vector<DegradabilityMode> parsed;
        for (const auto& name : modes) parsed.push_back(parse_mode(name));
        if (parsed.empty()) parsed.assign(kAllModes.begin(), kAllModes.end());
        FeasibilityOptions o;
        o.residual_tol = residual_tol;
        o.max_iters = max_iters;
        const ClassificationReport r = [&] {
          py::gil_scoped_release release;
          return classify(channel_from_ops(std::move(ops)), parsed, o);
        }();
        py::dict d;
        d["din"] = r.din;
        d["dout"] = r.dout;
        d["denv"] = r.denv;
        d["choi_rank"] = r.choi_rank;
        d["entanglement_breaking"] = r.entanglement_breaking;
        py::list verdicts;
        for (const auto& v : r.verdicts) verdicts.append(verdict_dict(v));
        d["verdicts"] = verdicts;
        return d;
      },
      py::arg("kraus"), py::arg("modes") = std::vector<std::string>{}, py::arg("residual_tol") = 1e-6,
      py::arg("max_iters") = 50000);
  m.def("is_entanglement_breaking", [](std::vector<ComplexMatrix> ops) { return is_entanglement_breaking(channel_from_ops(std::move(ops))); },
        py::arg("kraus"));
  m.def("conjugate_antidegrading_spectrum", [](double a, double b) { return conjugate_antidegrading_spectrum({a, b}); },
        py::arg("alpha"), py::arg("beta"));
  m.def("conjugate_degrading_spectrum", [](double a, double b) { return conjugate_degrading_spectrum({a, b}); },
        py::arg("alpha"), py::arg("beta"));
  m.def(
      "candidate_map_eigenvalues",
      [](double a, double b, bool antidegrading) {
        const KrausChannel ch = rank2_qubit_channel({a, b});
        return (antidegrading ? candidate_conjugate_antidegrading_map(ch) : candidate_conjugate_degrading_map(ch)).eigenvalues;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("antidegrading") = true);

  m.def(
      "unruh_capacity",
      [](double z, double tail_tol) {
        const UnruhCapacity q = unruh_capacity(z, tail_tol);
        return py::make_tuple(q.value, q.k_max, q.tail_bound);
      },
      py::arg("z"), py::arg("tail_tol") = 1e-12, "(value, k_max, tail_bound)");
  m.def("unruh_capacity_entropy_route", &unruh_capacity_entropy_route, py::arg("z"), py::arg("k_max"));
  m.def(
      "unruh_sweep",
      [](double z_min, double z_max, int steps, double tail_tol) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& r : unruh_sweep(z_min, z_max, steps, tail_tol)) rows.emplace_back(r.z, r.q_bits);
        return rows;
      },
      py::arg("z_min"), py::arg("z_max"), py::arg("steps"), py::arg("tail_tol") = 1e-12);
}
