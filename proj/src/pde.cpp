#include "sgc/pde.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "sgc/linalg.hpp"

namespace sgc {

double FemSolution::h1_seminorm() const { return sgc::h1_seminorm(std::span<const double>(nodal)); }

double h1_seminorm(std::span<const double> nodal) {
  const std::size_t n = nodal.size() + 1;
  double s = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k <= nodal.size(); ++k) {
    const double cur = k < nodal.size() ? nodal[k] : 0.0;
    s += (cur - prev) * (cur - prev);
    prev = cur;
  }
  return std::sqrt(s * static_cast<double>(n));  // sum h (du/h)^2
}

std::vector<double> quadrature_points(std::size_t mesh_n) {
  const double h = 1.0 / static_cast<double>(mesh_n);
  const double off = 0.5 * h / std::sqrt(3.0);
  std::vector<double> x(2 * mesh_n);
  for (std::size_t e = 0; e < mesh_n; ++e) {
    const double mid = (static_cast<double>(e) + 0.5) * h;
    x[2 * e] = mid - off;
    x[2 * e + 1] = mid + off;
  }
  return x;
}

FemSolution solve_with_quadrature_values(std::span<const double> a_quad, double f, std::size_t mesh_n) {
  if (mesh_n < 2) throw std::invalid_argument("fem: mesh_n must be at least 2");
  if (a_quad.size() != 2 * mesh_n) throw std::invalid_argument("fem: need two coefficient values per element");
  for (std::size_t q = 0; q < a_quad.size(); ++q) {
    if (!(a_quad[q] > 0.0) || !std::isfinite(a_quad[q])) {
      const double x = quadrature_points(mesh_n)[q];
      throw CoefficientError("fem: coefficient " + std::to_string(a_quad[q]) + " at x = " + std::to_string(x), x);
    }
  }
  const double h = 1.0 / static_cast<double>(mesh_n);
  const std::size_t n = mesh_n - 1;
  // Element stiffness abar_e / h with abar_e the 2-point Gauss mean.
  std::vector<double> k(mesh_n);
  for (std::size_t e = 0; e < mesh_n; ++e) k[e] = 0.5 * (a_quad[2 * e] + a_quad[2 * e + 1]) / h;
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0), rhs(n, f * h);
  for (std::size_t i = 0; i < n; ++i) diag[i] = k[i] + k[i + 1];
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = -k[i + 1];

  FemSolution u;
  u.mesh_n = mesh_n;
  u.nodal = solve_tridiagonal(off, diag, off, rhs);

  double rnorm = 0.0, anorm = 0.0, xnorm = 0.0, bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = rhs[i] - diag[i] * u.nodal[i];
    if (i > 0) r -= off[i - 1] * u.nodal[i - 1];
    if (i + 1 < n) r -= off[i] * u.nodal[i + 1];
    rnorm = std::max(rnorm, std::abs(r));
    anorm = std::max(anorm, std::abs(diag[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0));
    xnorm = std::max(xnorm, std::abs(u.nodal[i]));
    bnorm = std::max(bnorm, std::abs(rhs[i]));
  }
  const double scale = anorm * xnorm + bnorm;
  u.residual = scale > 0.0 ? rnorm / scale : 0.0;
  if (!(u.residual < 1e-12)) throw std::runtime_error("fem: linear solve residual " + std::to_string(u.residual));
  return u;
}

FemSolution solve(const std::function<double(double)>& a, double f, std::size_t mesh_n) {
  const auto xq = quadrature_points(mesh_n);
  std::vector<double> aq(xq.size());
  for (std::size_t q = 0; q < xq.size(); ++q) aq[q] = a(xq[q]);
  return solve_with_quadrature_values(aq, f, mesh_n);
}

double h1_distance(const FemSolution& u1, const FemSolution& u2) {
  const std::size_t n1 = u1.mesh_n, n2 = u2.mesh_n;
  if (n1 == n2) {
    double s = 0.0;
    for (std::size_t e = 0; e < n1; ++e) {
      const double d = u1.slope(e) - u2.slope(e);
      s += d * d;
    }
    return std::sqrt(s * u1.h());
  }
  // Merged breakpoints i/n1 and k/n2; compare i*n2 with k*n1 exactly.
  double s = 0.0;
  std::size_t i = 0, k = 0;
  double last = 0.0;
  while (i < n1 || k < n2) {
    const std::size_t next1 = (i + 1) * n2, next2 = (k + 1) * n1;
    const std::size_t stop = std::min(next1, next2);
    const double x = static_cast<double>(stop) / static_cast<double>(n1 * n2);
    const double d = u1.slope(i) - u2.slope(k);
    s += (x - last) * d * d;
    last = x;
    if (next1 == stop) ++i;
    if (next2 == stop) ++k;
  }
  return std::sqrt(s);
}

void write_solution_csv(std::ostream& os, const FemSolution& u) {
  os << "x,u\n";
  os.precision(17);
  for (std::size_t k = 0; k <= u.mesh_n; ++k) os << static_cast<double>(k) * u.h() << ',' << u.at(k) << '\n';
}

LognormalSolver::LognormalSolver(FieldExpansion field, std::size_t mesh_n, double f)
    : field_(std::move(field)), mesh_n_(mesh_n), f_(f), nq_(2 * mesh_n) {
  const auto xq = quadrature_points(mesh_n);
  table_.resize(field_.truncation * nq_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(field_.truncation); ++m)
    for (std::size_t q = 0; q < nq_; ++q)
      table_[static_cast<std::size_t>(m) * nq_ + q] = field_.phi(static_cast<std::size_t>(m) + 1, xq[q]);
}

FemSolution LognormalSolver::solve(std::span<const double> xi) const {
  std::vector<double> loga(nq_, 0.0);
  const std::size_t M = std::min(xi.size(), field_.truncation);
  for (std::size_t m = 0; m < M; ++m) {
    if (xi[m] == 0.0) continue;
    const double* row = table_.data() + m * nq_;
    for (std::size_t q = 0; q < nq_; ++q) loga[q] += row[q] * xi[m];
  }
  for (auto& v : loga) v = std::exp(v);
  return solve_with_quadrature_values(loga, f_, mesh_n_);
}

}  // namespace sgc
