#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sgc/multiindex.hpp"
#include "sgc/nodes.hpp"

namespace sgc {

/// L2(N(0,1))-orthonormal probabilists' Hermite polynomial of degree k.
double hermite_eval(int k, double x);

/// H_0(x), ..., H_kmax(x).
std::vector<double> hermite_all(int kmax, double x);

/// prod_m H_{k_m}(xi_m). Throws std::invalid_argument if xi does not cover
/// the active support of k.
double hermite_tensor_eval(const MultiIndex& k, std::span<const double> xi);

/// Finite expansion sum_k f_k H_k in the tensorized orthonormal basis.
struct HermiteExpansion {
  std::vector<std::pair<MultiIndex, double>> terms;

  double l2_norm() const;
  double evaluate(std::span<const double> xi) const;
};

/// Projection matrix P[l][j] = E[L_j H_l] for the rule's Lagrange basis,
/// l = 0..n-1, i.e. the inverse of the Hermite Vandermonde matrix at the nodes.
std::vector<std::vector<double>> lagrange_to_hermite(const UnivariateRule& rule);

struct DeltaNormEntry {
  int k = 0;
  double max_norm = 0.0;  // max_i ||Delta_i H_k||
  int argmax = 0;         // maximizing i
};

/// ||Delta_i H_k||_{L2} for i = 0..k+1 (zero beyond). Exact, via Hermite
/// coefficients of the interpolants.
std::vector<double> delta_norms(NodeFamily family, int k);

/// max_i ||Delta_i H_k|| for k = 0..kmax.
std::vector<DeltaNormEntry> delta_norm_profile(NodeFamily family, int kmax);

}  // namespace sgc
