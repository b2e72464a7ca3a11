#pragma once

#include <span>
#include <vector>

namespace sgc {

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `offdiag` (size n-1), ascending. Implicit QL with Wilkinson
/// shifts; throws std::runtime_error if an eigenvalue fails to converge.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> offdiag);

/// Solves the tridiagonal system with sub-diagonal `lower` (n-1), diagonal
/// `diag` (n), super-diagonal `upper` (n-1). No pivoting: intended for
/// diagonally dominant / SPD systems.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace sgc
