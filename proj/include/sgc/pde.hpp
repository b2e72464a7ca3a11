#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgc/field.hpp"

namespace sgc {

/// Piecewise-linear solution on a uniform mesh of [0,1] with zero boundary
/// values; `nodal` holds the mesh_n - 1 interior values.
struct FemSolution {
  std::size_t mesh_n = 0;
  std::vector<double> nodal;
  double residual = 0.0;  // normwise backward error of the linear solve

  double h() const { return 1.0 / static_cast<double>(mesh_n); }
  /// Nodal value at node k = 0..mesh_n (boundary nodes are 0).
  double at(std::size_t k) const { return (k == 0 || k == mesh_n) ? 0.0 : nodal[k - 1]; }
  double slope(std::size_t element) const { return (at(element + 1) - at(element)) / h(); }
  double h1_seminorm() const;
};

/// Raised when the diffusion coefficient is not positive and finite at a
/// quadrature point.
class CoefficientError : public std::domain_error {
 public:
  CoefficientError(const std::string& what, double x) : std::domain_error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

/// Gauss points of element e (two per element), in element order.
std::vector<double> quadrature_points(std::size_t mesh_n);

/// Solve -(a u')' = f, u(0) = u(1) = 0, with `a_quad` the coefficient at the
/// 2 * mesh_n points of quadrature_points(mesh_n).
FemSolution solve_with_quadrature_values(std::span<const double> a_quad, double f, std::size_t mesh_n);

FemSolution solve(const std::function<double(double)>& a, double f, std::size_t mesh_n);

/// H1_0 seminorm of u1 - u2; solutions on different meshes are compared on
/// the merged breakpoints.
double h1_distance(const FemSolution& u1, const FemSolution& u2);

/// H1_0 seminorm of interior nodal values on a mesh with nodal.size() + 1
/// elements.
double h1_seminorm(std::span<const double> nodal);

/// CSV "x,u" including the boundary nodes.
void write_solution_csv(std::ostream& os, const FemSolution& u);

/// Solves the lognormal problem for many parameter vectors with a shared
/// basis table phi_m(quadrature point). Thread safe.
class LognormalSolver {
 public:
  LognormalSolver(FieldExpansion field, std::size_t mesh_n, double f = 1.0);

  const FieldExpansion& field() const { return field_; }
  std::size_t mesh_n() const { return mesh_n_; }

  /// Entries of xi beyond the truncation are ignored; missing entries are 0.
  FemSolution solve(std::span<const double> xi) const;

 private:
  FieldExpansion field_;
  std::size_t mesh_n_;
  double f_;
  std::size_t nq_;
  std::vector<double> table_;  // table_[m * nq_ + q] = phi_{m+1}(x_q)
};

}  // namespace sgc
