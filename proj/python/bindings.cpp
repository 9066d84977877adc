#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reelab/closedform.hpp"
#include "reelab/dicke.hpp"
#include "reelab/dur.hpp"
#include "reelab/inequalities.hpp"
#include "reelab/serialize.hpp"
#include "reelab/solver.hpp"

namespace py = pybind11;
using namespace reelab;

namespace {

DensityOperator density(const Matrix& m, const std::vector<int>& dims) { return DensityOperator(HilbertLayout(dims), m); }

std::vector<int> qubit_dims(const Matrix& m) {
  int n = 0;
  while ((Index{1} << n) < m.rows()) ++n;
  if ((Index{1} << n) != m.rows()) throw ValidationError("matrix dimension is not a power of two; pass party_dims");
  return std::vector<int>(static_cast<std::size_t>(n), 2);
}

std::vector<int> dims_or_qubits(const Matrix& m, const std::optional<std::vector<int>>& dims) {
  return dims ? *dims : qubit_dims(m);
}

SolverConfig config(int max_outer, std::uint64_t seed) {
  SolverConfig c;
  c.max_outer = max_outer;
  c.seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entanglement measures for multipartite states";
#ifdef VERSION_INFO
#define REELAB_STR(x) #x
#define REELAB_XSTR(x) REELAB_STR(x)
  m.attr("__version__") = REELAB_XSTR(VERSION_INFO);
#endif

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("lambda_max_dicke", [](int n, int k) { return lambda_max_dicke(DickeIndex(n, k)); }, py::arg("n"), py::arg("k"));
  m.def("lambda_max_qudit", [](std::vector<int> kvec) { return lambda_max_qudit(QuditComposition(std::move(kvec))); },
        py::arg("kvec"));
  m.def("pure_dicke_ree", [](int n, int k) { return pure_dicke_ree(DickeIndex(n, k)); }, py::arg("n"), py::arg("k"));
  m.def("f_value", [](int n, std::vector<double> p) { return f_value(DickeMixture(n, std::move(p))); }, py::arg("n"),
        py::arg("weights"));
  m.def("ree_two_component", py::overload_cast<int, int, int, double>(&ree_two_component), py::arg("n"),
        py::arg("k1"), py::arg("k2"), py::arg("s"));
  m.def(
      "ree_dicke",
      [](int n, std::vector<double> p) {
        const auto v = ree_dicke(DickeMixture(n, std::move(p)));
        return py::make_tuple(v.value, v.method);
      },
      py::arg("n"), py::arg("weights"), "E_R of sum_k p_k |S(n,k)><S(n,k)| as (value, method).");
  m.def(
      "e_log_dicke",
      [](int n, std::vector<double> p) {
        const auto v = e_log_mixture(DickeMixture(n, std::move(p)));
        return py::make_tuple(v.value, v.method);
      },
      py::arg("n"), py::arg("weights"));
  m.def(
      "trace_down",
      [](int n, int k) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& st : trace_down_report(DickeIndex(n, k))) out.emplace_back(st.state, st.e_r);
        return out;
      },
      py::arg("n"), py::arg("k"));
  m.def(
      "dicke_mixture_density",
      [](int n, std::vector<double> p) { return mixture_density(DickeMixture(n, std::move(p))).matrix(); },
      py::arg("n"), py::arg("weights"));

  m.def(
      "relative_entropy",
      [](const Matrix& rho, const Matrix& sigma, std::optional<std::vector<int>> dims) {
        const auto d = dims_or_qubits(rho, dims);
        return relative_entropy(density(rho, d), density(sigma, d));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("party_dims") = py::none());
  m.def(
      "von_neumann_entropy",
      [](const Matrix& rho, std::optional<std::vector<int>> dims) {
        return von_neumann_entropy(density(rho, dims_or_qubits(rho, dims)));
      },
      py::arg("rho"), py::arg("party_dims") = py::none());
  m.def(
      "minimize_ree",
      [](const Matrix& rho, std::optional<std::vector<int>> dims, int max_outer, std::uint64_t seed) {
        const auto r = minimize_ree(density(rho, dims_or_qubits(rho, dims)), config(max_outer, seed));
        py::dict out;
        out["value"] = r.value;
        out["gap"] = r.gap;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["sigma"] = r.ensemble.matrix();
        return out;
      },
      py::arg("rho"), py::arg("party_dims") = py::none(), py::arg("max_outer") = 500, py::arg("seed") = 2008);
  m.def(
      "lambda_max_numeric",
      [](const Vector& psi, std::optional<std::vector<int>> dims, std::uint64_t seed) {
        const auto d = dims ? *dims : qubit_dims(Matrix(psi.size(), psi.size()));
        return lambda_max_numeric(PureState(HilbertLayout(d), psi), config(500, seed));
      },
      py::arg("psi"), py::arg("party_dims") = py::none(), py::arg("seed") = 2008);

  m.def("dur_state", [](int N, double x) { return dur_state({N, x}).matrix(); }, py::arg("N"), py::arg("x"));
  m.def("dur_closest_separable", [](int N, double x) { return dur_closest_separable({N, x}).matrix(); }, py::arg("N"),
        py::arg("x"));
  m.def("dur_ree", [](int N, double x) { return dur_ree({N, x}); }, py::arg("N"), py::arg("x"));
  m.def("dur_e_log", [](int N, double x) { return dur_e_log({N, x}); }, py::arg("N"), py::arg("x"));
  m.def("g_function", [](std::vector<double> angles) { return g_function(angles); }, py::arg("angles"));
  m.def(
      "g_max",
      [](int N, int samples, std::uint64_t seed) {
        const auto g = g_max(N, samples, seed);
        return py::make_tuple(g.value, g.angles);
      },
      py::arg("N"), py::arg("samples") = 100000, py::arg("seed") = 2008);

  m.def("density_from_json", [](const std::string& text) { return density_from_json(text).matrix(); },
        py::arg("text"));
}
