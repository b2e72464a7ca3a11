#include "sgc/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sgc {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

// l = floor(log2 m), j = m - 2^l.
std::pair<int, std::size_t> dyadic(std::size_t m) {
  int l = 0;
  while ((std::size_t{1} << (l + 1)) <= m) ++l;
  return {l, m - (std::size_t{1} << l)};
}

void check_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("field: x = " + std::to_string(x) + " outside [0,1]");
}

}  // namespace

ExpansionKind parse_expansion_kind(std::string_view name) {
  std::string n(name);
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "kl") return ExpansionKind::KL;
  if (n == "lc") return ExpansionKind::LC;
  if (n == "chalf" || n == "haar" || n == "haarchalf") return ExpansionKind::HaarChalf;
  throw std::invalid_argument("unknown expansion kind '" + std::string(name) + "'");
}

std::string_view to_string(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::KL: return "kl";
    case ExpansionKind::LC: return "lc";
    case ExpansionKind::HaarChalf: return "chalf";
  }
  return "?";
}

double lc_hat(double x) { return std::max(0.0, 1.0 - std::abs(2.0 * x - 1.0)); }

double FieldExpansion::phi(std::size_t m, double x) const {
  if (m == 0) throw std::invalid_argument("field: function index starts at 1");
  check_x(x);
  switch (kind) {
    case ExpansionKind::KL:
      return sigma * sqrt2 / std::pow(pi * static_cast<double>(m), q) * std::sin(pi * static_cast<double>(m) * x);
    case ExpansionKind::LC: {
      const auto [l, j] = dyadic(m);
      const double scale = std::ldexp(1.0, l);
      return sigma * lc_scale / std::sqrt(scale) * lc_hat(scale * x - static_cast<double>(j));
    }
    case ExpansionKind::HaarChalf:
      return sigma * chalf_haar(q, m, x, chalf_series);
  }
  return 0.0;
}

double FieldExpansion::phi_sup(std::size_t m) const {
  if (m == 0) throw std::invalid_argument("field: function index starts at 1");
  switch (kind) {
    case ExpansionKind::KL:
      return sigma * sqrt2 / std::pow(pi * static_cast<double>(m), q);
    case ExpansionKind::LC:
      return sigma * lc_scale / std::sqrt(std::ldexp(1.0, dyadic(m).first));
    case ExpansionKind::HaarChalf: {
      double s = 0.0;
      constexpr int n = 2048;
      for (int i = 0; i <= n; ++i) s = std::max(s, std::abs(phi(m, static_cast<double>(i) / n)));
      return s;
    }
  }
  return 0.0;
}

double FieldExpansion::log_a(std::span<const double> xi, double x) const {
  if (xi.size() < truncation)
    throw std::invalid_argument("field: parameter vector has " + std::to_string(xi.size()) + " entries, need " +
                                std::to_string(truncation));
  check_x(x);
  double s = 0.0;
  for (std::size_t m = 1; m <= truncation; ++m)
    if (xi[m - 1] != 0.0) s += phi(m, x) * xi[m - 1];
  return s;
}

double FieldExpansion::a(std::span<const double> xi, double x) const { return std::exp(log_a(xi, x)); }

double chalf_haar(double q, std::size_t m, double x, std::size_t terms) {
  if (m == 0) throw std::invalid_argument("chalf_haar: wavelet index starts at 1");
  check_x(x);
  // Support [lo, hi] with sign change at mid (no sign change for m = 1).
  double lo = 0.0, hi = 1.0, amp = 1.0;
  bool scaling = (m == 1);
  if (!scaling) {
    const auto [l, j] = dyadic(m - 1);
    const double len = std::ldexp(1.0, -l);
    lo = static_cast<double>(j) * len;
    hi = lo + len;
    amp = std::sqrt(std::ldexp(1.0, l));
  }
  const double mid = 0.5 * (lo + hi);
  double s = 0.0;
  for (std::size_t n = 1; n <= terms; ++n) {
    const double w = pi * static_cast<double>(n);
    // <sqrt2 sin(w .), psi_m> in closed form.
    double ip;
    if (scaling)
      ip = sqrt2 * (std::cos(w * lo) - std::cos(w * hi)) / w;
    else
      ip = amp * sqrt2 * ((std::cos(w * lo) - std::cos(w * mid)) - (std::cos(w * mid) - std::cos(w * hi))) / w;
    s += std::pow(w, -q) * std::sin(w * x) * ip;
  }
  return sqrt2 * s;
}

double variance_coverage(double q, std::size_t M) {
  if (q < 1.0 || M == 0) throw std::invalid_argument("variance_coverage: need q >= 1 and M >= 1");
  const double s = 2.0 * q;
  const std::size_t n = std::max<std::size_t>(M, 1000);
  double head = 0.0, total = 0.0;
  // Sum from the small terms up.
  for (std::size_t m = n; m >= 1; --m) {
    const double t = std::pow(static_cast<double>(m), -s);
    total += t;
    if (m <= M) head += t;
  }
  // Euler-Maclaurin tail of sum_{m>n} m^{-s}; next term is O(n^{-s-3}).
  const double nn = static_cast<double>(n);
  total += std::pow(nn, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(nn, -s) + s / 12.0 * std::pow(nn, -s - 1.0);
  return head / total;
}

double kappa_tau(double p, std::size_t M, double x) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t m = 1; m <= M; ++m) {
    const double md = static_cast<double>(m);
    const double term = std::pow(md, 1.0 / p) * sqrt2 / (pi * md) * std::sin(md * pi * x);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::vector<double> kappa_tau(double p, std::size_t M, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = kappa_tau(p, M, xs[static_cast<std::size_t>(i)]);
  return out;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

std::vector<std::vector<double>> sample_paths(const FieldExpansion& field, std::span<const double> xs,
                                              std::size_t samples, std::uint64_t seed) {
  // Basis table phi_m(x_j), shared by all samples.
  const std::size_t M = field.truncation;
  std::vector<double> table(M * xs.size());
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t j = 0; j < xs.size(); ++j) table[m * xs.size() + j] = field.phi(m + 1, xs[j]);
  std::vector<std::vector<double>> out(samples, std::vector<double>(xs.size(), 0.0));
  const auto ns = static_cast<std::ptrdiff_t>(samples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < ns; ++s) {
    auto rng = substream(seed, static_cast<std::uint64_t>(s));
    const auto xi = gaussian_vector(rng, M);
    auto& row = out[static_cast<std::size_t>(s)];
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t j = 0; j < xs.size(); ++j) row[j] += table[m * xs.size() + j] * xi[m];
    for (auto& v : row) v = std::exp(v);
  }
  return out;
}

}  // namespace sgc
