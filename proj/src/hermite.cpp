#include "sgc/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sgc {

double hermite_eval(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_eval: negative degree");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_all(int kmax, double x) {
  std::vector<double> h(static_cast<std::size_t>(kmax) + 1, 1.0);
  if (kmax >= 1) h[1] = x;
  for (int j = 1; j < kmax; ++j) {
    h[static_cast<std::size_t>(j) + 1] =
        (x * h[static_cast<std::size_t>(j)] - std::sqrt(static_cast<double>(j)) * h[static_cast<std::size_t>(j) - 1]) /
        std::sqrt(j + 1.0);
  }
  return h;
}

double hermite_tensor_eval(const MultiIndex& k, std::span<const double> xi) {
  double v = 1.0;
  for (const auto& [m, l] : k.entries()) {
    if (m >= xi.size()) throw std::invalid_argument("hermite_tensor_eval: missing coordinate");
    v *= hermite_eval(l, xi[m]);
  }
  return v;
}

double HermiteExpansion::l2_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : terms) s += c * c;
  return std::sqrt(s);
}

double HermiteExpansion::evaluate(std::span<const double> xi) const {
  double s = 0.0;
  for (const auto& [k, c] : terms) s += c * hermite_tensor_eval(k, xi);
  return s;
}

std::vector<std::vector<double>> lagrange_to_hermite(const UnivariateRule& rule) {
  // L_j = sum_l P[l][j] H_l, so P is the inverse of V[j][l] = H_l(x_j).
  // Gauss-Jordan in long double: the 35-node Genz-Keister rule loses ~1e-8
  // through a double-precision quadrature of L_j H_l.
  const std::size_t n = rule.size();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(2 * n, 0.0L));
  for (std::size_t j = 0; j < n; ++j) {
    const long double x = rule.nodes[j];
    long double prev = 1.0L, cur = x;
    a[j][0] = 1.0L;
    if (n > 1) a[j][1] = x;
    for (std::size_t l = 2; l < n; ++l) {
      const long double next = (x * cur - std::sqrt(static_cast<long double>(l - 1)) * prev) /
                               std::sqrt(static_cast<long double>(l));
      prev = cur;
      cur = next;
      a[j][l] = next;
    }
    a[j][n + j] = 1.0L;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (a[piv][c] == 0.0L) throw std::invalid_argument("lagrange_to_hermite: repeated nodes");
    std::swap(a[c], a[piv]);
    const long double d = a[c][c];
    for (auto& v : a[c]) v /= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0.0L) continue;
      const long double f = a[i][c];
      for (std::size_t k = c; k < 2 * n; ++k) a[i][k] -= f * a[c][k];
    }
  }
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j) p[l][j] = static_cast<double>(a[l][n + j]);
  return p;
}

namespace {

// Hermite coefficients (length level+1) of U_level H_k.
std::vector<double> interpolant_coefficients(NodeFamily family, int level, int k) {
  const auto r = rule(family, level);
  const auto p = lagrange_to_hermite(*r);
  std::vector<double> vals(r->size());
  for (std::size_t j = 0; j < r->size(); ++j) vals[j] = hermite_eval(k, r->nodes[j]);
  std::vector<double> c(r->size(), 0.0);
  for (std::size_t l = 0; l < r->size(); ++l)
    for (std::size_t j = 0; j < r->size(); ++j) c[l] += p[l][j] * vals[j];
  return c;
}

}  // namespace

std::vector<double> delta_norms(NodeFamily family, int k) {
  if (k < 0) throw std::invalid_argument("delta_norms: negative degree");
  std::vector<double> out;
  std::vector<double> prev;  // coefficients of U_{i-1} H_k
  for (int i = 0; i <= k + 1; ++i) {
    const auto cur = interpolant_coefficients(family, i, k);
    double s = 0.0;
    for (std::size_t l = 0; l < cur.size(); ++l) {
      const double d = cur[l] - (l < prev.size() ? prev[l] : 0.0);
      s += d * d;
    }
    for (std::size_t l = cur.size(); l < prev.size(); ++l) s += prev[l] * prev[l];
    out.push_back(std::sqrt(s));
    prev = cur;
  }
  return out;
}

std::vector<DeltaNormEntry> delta_norm_profile(NodeFamily family, int kmax) {
  if (family == NodeFamily::GenzKeister)
    throw std::invalid_argument("delta_norm_profile: family must be GaussHermite or GaussianLeja");
  std::vector<DeltaNormEntry> out(static_cast<std::size_t>(kmax) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= kmax; ++k) {
    const auto norms = delta_norms(family, k);
    DeltaNormEntry e;
    e.k = k;
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (norms[i] > e.max_norm) {
        e.max_norm = norms[i];
        e.argmax = static_cast<int>(i);
      }
    }
    out[static_cast<std::size_t>(k)] = e;
  }
  return out;
}

}  // namespace sgc
