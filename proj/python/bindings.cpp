#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clyap/coeff.hpp"
#include "clyap/error.hpp"
#include "clyap/estimator.hpp"
#include "clyap/lyapunov.hpp"
#include "clyap/sampler.hpp"

namespace py = pybind11;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

clyap::SymmetricTensor to_tensor(const FArray& a) {
  std::vector<int> dims;
  for (py::ssize_t i = 0; i < a.ndim(); ++i) dims.push_back(static_cast<int>(a.shape(i)));
  if (dims.empty()) throw clyap::InvalidArgument("tensor must have at least one axis");
  clyap::DenseTensor t(dims);
  const double* p = a.data();
  for (std::size_t i = 0; i < t.size(); ++i) t.at_flat(i) = p[i];
  return clyap::SymmetricTensor::from_dense(t);
}

FArray to_array(const clyap::SymmetricTensor& s) {
  const auto dense = s.to_dense();
  std::vector<py::ssize_t> shape(dense.dims().begin(), dense.dims().end());
  FArray out(shape);
  double* p = out.mutable_data();
  for (std::size_t i = 0; i < dense.size(); ++i) p[i] = dense.at_flat(i);
  return out;
}

std::vector<clyap::SymmetricTensor> to_tensors(const std::vector<FArray>& arrays) {
  std::vector<clyap::SymmetricTensor> out;
  for (const auto& a : arrays) out.push_back(to_tensor(a));
  return out;
}

py::dict estimate_dict(const clyap::DriftEstimate& e) {
  py::dict d;
  d["m_hat"] = e.m_hat;
  d["sigma_min"] = e.sigma_min;
  d["gap"] = e.gap;
  d["stable"] = e.stable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graphical continuous Lyapunov models";
  py::register_exception<clyap::Error>(m, "ClyapError", PyExc_ValueError);

  m.def(
      "solve_lyapunov",
      [](const Eigen::MatrixXd& drift, const FArray& c) { return to_array(clyap::solve_lyapunov(drift, to_tensor(c))); },
      py::arg("m"), py::arg("c"), "Steady-state cumulant K solving K x_1 M + ... + K x_k M + C = 0.");

  m.def(
      "forward_map",
      [](const Eigen::MatrixXd& drift, const Eigen::VectorXd& c2, const Eigen::VectorXd& cr, int r) {
        const auto pair = clyap::forward_map({drift, c2, cr, r});
        return py::make_tuple(to_array(pair.sigma), to_array(pair.kappa));
      },
      py::arg("m"), py::arg("c2"), py::arg("cr"), py::arg("r") = 3);

  m.def(
      "construct_drift", [](int d, double gamma, double rho) { return clyap::construct_M({d, gamma, rho}); },
      py::arg("d") = 3, py::arg("gamma") = 10.0, py::arg("rho") = 0.2);

  m.def(
      "sample_steady_state",
      [](const Eigen::MatrixXd& drift, int n, std::uint64_t seed, double lambda, double mu, double nu) {
        const auto levy = clyap::LevySpec::uniform_beta(static_cast<int>(drift.rows()), lambda, mu, nu);
        clyap::SampleBatch batch;
        {
          py::gil_scoped_release release;
          batch = clyap::sample_steady_state(drift, levy, n, seed);
        }
        return batch.rows;
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 1, py::arg("lam") = 0.5, py::arg("mu") = 0.8,
      py::arg("nu") = 1.0);

  m.def(
      "estimate_drift",
      [](const Eigen::MatrixXd& sample, std::vector<int> orders) {
        return estimate_dict(clyap::estimate_drift(clyap::SampleBatch{sample}, orders));
      },
      py::arg("sample"), py::arg("orders") = std::vector<int>{2, 3});

  m.def(
      "estimate_drift_from_cumulants",
      [](const std::vector<FArray>& cumulants) { return estimate_dict(clyap::estimate_drift(to_tensors(cumulants))); },
      py::arg("cumulants"));

  m.def(
      "drift_system_matrix",
      [](const std::vector<FArray>& cumulants) { return clyap::drift_system(to_tensors(cumulants)).matrix; },
      py::arg("cumulants"), "Stacked off-diagonal coefficient matrix over all d^2 columns.");

  m.def(
      "identifiability",
      [](int d, const std::vector<std::pair<int, int>>& edges, int r, int trials, std::uint64_t seed) {
        clyap::DirectedGraph g(d);
        for (const auto& [a, b] : edges) {
          if (a < 1 || b < 1) throw clyap::InvalidArgument("edge labels are one-based");
          g.add_edge(a - 1, b - 1);
        }
        const auto rep = clyap::generic_identifiability_check(g, r, trials, seed);
        py::dict out;
        out["verdict"] = rep.verdict;
        out["ranks"] = rep.ranks;
        out["expected_rank"] = rep.expected_rank;
        out["max_rank"] = rep.max_rank;
        out["trials_at_expected_rank"] = rep.hits;
        out["components"] = rep.components;
        out["warnings"] = rep.warnings;
        return out;
      },
      py::arg("d"), py::arg("edges"), py::arg("r") = 3, py::arg("trials") = 100, py::arg("seed") = 1,
      "Generic rank check; edges are one-based (from, to) pairs.");

  m.def(
      "two_point_jump",
      [](double c2, double cr, int r) {
        const auto j = clyap::two_point_jump(c2, cr, r);
        return py::make_tuple(j.a, j.b, j.p);
      },
      py::arg("c2"), py::arg("cr"), py::arg("r"), "Support points (a, b) and weight p of a two-point jump law.");
}
