#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sgc/bench.hpp"
#include "sgc/config.hpp"
#include "sgc/field.hpp"
#include "sgc/hermite.hpp"
#include "sgc/multiindex.hpp"
#include "sgc/nodes.hpp"
#include "sgc/pde.hpp"
#include "sgc/sparse_grid.hpp"

namespace py = pybind11;

namespace {

// Index sets cross the boundary as lists of 0-based level lists of equal length.
using DenseSet = std::vector<std::vector<int>>;

sgc::MultiIndexSet to_set(const DenseSet& rows) {
  std::vector<sgc::MultiIndex> out;
  const std::size_t dims = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != dims) throw std::invalid_argument("index set rows must have equal length");
    out.emplace_back(r);
  }
  return sgc::MultiIndexSet(std::move(out), dims);
}

DenseSet to_dense(const sgc::MultiIndexSet& set, std::size_t dims) {
  DenseSet out;
  for (const auto& k : set) out.push_back(k.dense(dims));
  return out;
}

sgc::FieldExpansion make_field(const std::string& kind, double q, double sigma, std::size_t M) {
  sgc::FieldExpansion f;
  f.kind = sgc::parse_expansion_kind(kind);
  f.q = q;
  f.sigma = sigma;
  f.truncation = M;
  return f;
}

struct PyGrid {
  sgc::SparseGrid grid;
  std::size_t dims = 0;

  py::array_t<double> points() const {
    py::array_t<double> a({grid.num_points(), grid.dims()});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t j = 0; j < grid.num_points(); ++j)
      for (std::size_t d = 0; d < grid.dims(); ++d) m(j, d) = grid.point(j)[d];
    return a;
  }

  // Length mismatches are rejected by the grid operations themselves.
  sgc::GridValues values(const std::vector<double>& v) const { return sgc::GridValues::scalar(v); }
};

}  // namespace

PYBIND11_MODULE(_sgc, m) {
  m.doc() = "Sparse-grid collocation core";

  m.def(
      "rule",
      [](const std::string& family, int level) {
        const auto r = sgc::rule(sgc::parse_family(family), level);
        return py::make_tuple(r->nodes, r->weights);
      },
      py::arg("family"), py::arg("level"), "Nodes and weights of a univariate rule.");
  m.def("gaussian_leja", &sgc::gaussian_leja, py::arg("n"), "First n Gaussian Leja points, in construction order.");
  m.def("hermite_eval", &sgc::hermite_eval, py::arg("k"), py::arg("x"), "Orthonormal Hermite polynomial H_k(x).");
  m.def(
      "delta_norm_profile",
      [](const std::string& family, int kmax) {
        std::vector<double> out;
        for (const auto& e : sgc::delta_norm_profile(sgc::parse_family(family), kmax)) out.push_back(e.max_norm);
        return out;
      },
      py::arg("family"), py::arg("kmax"), "max_i ||Delta_i H_k|| for k = 0..kmax.");

  m.def(
      "smolyak_set", [](std::size_t dims, int w) { return to_dense(sgc::smolyak_set(dims, w), dims); },
      py::arg("dims"), py::arg("w"));
  m.def(
      "reduced_margin",
      [](const DenseSet& rows) {
        const auto s = to_set(rows);
        return to_dense(sgc::reduced_margin(s), s.dimension_bound());
      },
      py::arg("index_set"));
  m.def(
      "combination_coefficients",
      [](const DenseSet& rows) {
        const auto s = to_set(rows);
        std::vector<std::pair<std::vector<int>, int>> out;
        for (const auto& [k, c] : sgc::combination_coefficients(s)) out.emplace_back(k.dense(s.dimension_bound()), c);
        return out;
      },
      py::arg("index_set"));

  py::class_<PyGrid>(m, "SparseGrid")
      .def(py::init([](const DenseSet& rows, const std::string& family) {
             const auto s = to_set(rows);
             return PyGrid{sgc::SparseGrid::build(s, sgc::parse_family(family)), s.dimension_bound()};
           }),
           py::arg("index_set"), py::arg("family"))
      .def_property_readonly("points", &PyGrid::points)
      .def_property_readonly("incremental_count", [](const PyGrid& g) { return g.grid.incremental_count(); })
      .def_property_readonly("combitec_count", [](const PyGrid& g) { return g.grid.combitec_count(); })
      .def_property_readonly("terms",
                             [](const PyGrid& g) {
                               std::vector<std::pair<std::vector<int>, int>> out;
                               for (const auto& t : g.grid.terms()) out.emplace_back(t.index.dense(g.dims), t.coefficient);
                               return out;
                             })
      .def("quadrature_weights", [](const PyGrid& g) { return g.grid.quadrature_weights(); })
      .def(
          "quadrature", [](const PyGrid& g, const std::vector<double>& v) { return g.grid.quadrature(g.values(v)); },
          py::arg("values"))
      .def(
          "evaluate",
          [](const PyGrid& g, const std::vector<double>& v, const std::vector<double>& xi) {
            return g.grid.evaluate(g.values(v), xi);
          },
          py::arg("values"), py::arg("xi"))
      .def(
          "hermite_coefficients",
          [](const PyGrid& g, const std::vector<double>& v) {
            std::vector<std::pair<std::vector<int>, double>> out;
            for (const auto& [k, c] : sgc::to_hermite(g.grid, g.values(v)).terms) out.emplace_back(k.dense(g.dims), c);
            return out;
          },
          py::arg("values"));

  m.def("variance_coverage", &sgc::variance_coverage, py::arg("q"), py::arg("M"));
  m.def(
      "kappa_tau", [](double p, std::size_t M, const std::vector<double>& xs) { return sgc::kappa_tau(p, M, xs); },
      py::arg("p"), py::arg("M"), py::arg("x"));
  m.def(
      "sample_paths",
      [](const std::string& kind, double q, double sigma, std::size_t M, const std::vector<double>& xs,
         std::size_t samples, std::uint64_t seed) {
        return sgc::sample_paths(make_field(kind, q, sigma, M), xs, samples, seed);
      },
      py::arg("kind"), py::arg("q"), py::arg("sigma"), py::arg("M"), py::arg("x"), py::arg("samples"),
      py::arg("seed"), "Realizations of a(x) = exp(sum_m xi_m phi_m(x)) on the given x values.");
  m.def(
      "solve_lognormal",
      [](const std::string& kind, double q, double sigma, std::size_t M, const std::vector<double>& xi,
         std::size_t mesh, double rhs) {
        const sgc::LognormalSolver solver(make_field(kind, q, sigma, M), mesh, rhs);
        const auto u = solver.solve(xi);
        return py::make_tuple(u.nodal, u.h1_seminorm());
      },
      py::arg("kind"), py::arg("q"), py::arg("sigma"), py::arg("M"), py::arg("xi"), py::arg("mesh") = 256,
      py::arg("rhs") = 1.0, "Interior nodal values and H1_0 seminorm of one FEM solve.");
  m.def(
      "run_bench",
      [](const std::string& kind, const std::string& config_text) {
        const auto cfg = sgc::Config::parse(config_text);
        std::ostringstream os;
        if (kind == "quad") {
          sgc::write_csv(os, cfg, sgc::run_quadrature_bench(cfg));
        } else if (kind == "interp") {
          sgc::write_csv(os, cfg, sgc::run_interpolation_bench(cfg));
        } else if (kind == "pde") {
          sgc::write_csv(os, cfg, sgc::run_pde_bench(cfg).curves);
        } else if (kind == "bnt") {
          sgc::write_csv(os, cfg, sgc::run_bnt(cfg));
        } else {
          throw std::invalid_argument("unknown bench '" + kind + "'");
        }
        return os.str();
      },
      py::arg("kind"), py::arg("config"), "Runs a benchmark from INI text and returns the CSV.");
}
