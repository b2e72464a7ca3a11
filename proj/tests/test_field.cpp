#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "sgc/field.hpp"

using sgc::ExpansionKind;
using sgc::FieldExpansion;
using std::numbers::pi;

namespace {

FieldExpansion field(ExpansionKind kind, double q = 1.0, double sigma = 1.0, std::size_t M = 1000) {
  FieldExpansion f;
  f.kind = kind;
  f.q = q;
  f.sigma = sigma;
  f.truncation = M;
  return f;
}

// max over a 21x21 grid of |sum_{m<=M} phi_m(x) phi_m(y) - (min(x,y) - xy)|.
double covariance_deviation(const FieldExpansion& f, std::size_t M) {
  double worst = 0.0;
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b) {
      const double x = a / 20.0, y = b / 20.0;
      double s = 0.0;
      for (std::size_t m = 1; m <= M; ++m) s += f.phi(m, x) * f.phi(m, y);
      worst = std::max(worst, std::abs(s - (std::min(x, y) - x * y)));
    }
  return worst;
}

}  // namespace

TEST_CASE("expansion kind names") {
  CHECK(sgc::parse_expansion_kind("KL") == ExpansionKind::KL);
  CHECK(sgc::parse_expansion_kind("lc") == ExpansionKind::LC);
  CHECK(sgc::parse_expansion_kind("chalf") == ExpansionKind::HaarChalf);
  CHECK_THROWS_AS(sgc::parse_expansion_kind("matern"), std::invalid_argument);
  CHECK(sgc::to_string(ExpansionKind::LC) == "lc");
}

TEST_CASE("phi values") {
  CHECK(field(ExpansionKind::KL).phi(1, 0.5) == doctest::Approx(std::sqrt(2.0) / pi));
  auto lc = field(ExpansionKind::LC);
  lc.lc_scale = 1.0;
  CHECK(lc.phi(1, 0.5) == doctest::Approx(1.0));
  CHECK(lc.phi(2, 0.25) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(lc.phi(3, 0.25) == 0.0);
  CHECK(lc.phi(3, 0.75) == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (auto kind : {ExpansionKind::KL, ExpansionKind::LC, ExpansionKind::HaarChalf}) {
    const auto f = field(kind, 3.0);
    for (std::size_t m : {1, 2, 7, 64}) {
      CHECK(std::abs(f.phi(m, 0.0)) < 1e-15);
      CHECK(std::abs(f.phi(m, 1.0)) < 1e-12);
    }
    CHECK_THROWS_AS(f.phi(1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(f.phi(0, 0.5), std::invalid_argument);
  }
}

TEST_CASE("phi sup-norm decay") {
  const auto kl = field(ExpansionKind::KL, 2.0, 3.0);
  const auto lc = field(ExpansionKind::LC, 1.0, 3.0);
  for (std::size_t m = 1; m <= 40; ++m) {
    CHECK(kl.phi_sup(m) == doctest::Approx(3.0 * std::sqrt(2.0) / std::pow(pi * m, 2.0)));
    const int l = static_cast<int>(std::floor(std::log2(static_cast<double>(m))));
    CHECK(lc.phi_sup(m) == doctest::Approx(3.0 * 0.5 * std::pow(2.0, -l / 2.0)));
    // The LC hat apex lies on the dyadic grid.
    const double apex = (m - std::pow(2.0, l) + 0.5) / std::pow(2.0, l);
    CHECK(lc.phi(m, apex) == doctest::Approx(lc.phi_sup(m)));
  }
}

TEST_CASE("log_a") {
  const auto f = field(ExpansionKind::KL, 1.0, 2.0, 5);
  const std::vector<double> zero(5, 0.0);
  CHECK(f.log_a(zero, 0.3) == 0.0);
  CHECK(f.a(zero, 0.3) == 1.0);
  const std::vector<double> one{1, 0, 0, 0, 0};
  CHECK(f.log_a(one, 0.5) == doctest::Approx(2.0 * std::sqrt(2.0) / pi));
  const std::vector<double> xi{0.3, -1.1, 2.0, 0.5, -0.7};
  std::vector<double> twice(xi);
  for (auto& v : twice) v *= 2.0;
  for (double x : {0.1, 0.45, 0.9}) CHECK(f.log_a(twice, x) == doctest::Approx(2.0 * f.log_a(xi, x)));
  CHECK_THROWS_AS(f.log_a(std::vector<double>{1, 2}, 0.5), std::invalid_argument);
}

TEST_CASE("variance coverage") {
  CHECK(sgc::variance_coverage(1.0, 1) == doctest::Approx(6.0 / (pi * pi)).epsilon(1e-12));
  const double c1 = sgc::variance_coverage(1.0, 1000);
  CHECK(c1 >= 0.9992);
  CHECK(c1 <= 0.9995);
  const double c15 = sgc::variance_coverage(1.5, 1000);
  CHECK(c15 >= 0.9999994);
  CHECK(c15 <= 0.9999998);
  CHECK(sgc::variance_coverage(3.0, 1000) > 1.0 - 1e-9);
  // Against the zeta(2) closed form: 1 - coverage ~ 1/M * 6/pi^2.
  CHECK((1.0 - c1) == doctest::Approx(6.0 / (pi * pi) * (1.0 / 1000 - 0.5 / 1e6)).epsilon(1e-3));
}

TEST_CASE("kappa_tau") {
  CHECK(sgc::kappa_tau(4.0, 1, 0.5) == doctest::Approx(std::sqrt(2.0) / pi));
  // Partial sums at x and 1-x differ only by the even-m terms.
  const double p = 3.0, x = 0.137;
  const std::size_t M = 401;
  double even = 0.0;
  for (std::size_t m = 2; m <= M; m += 2) even += std::pow(m, 1.0 / p) * std::sqrt(2.0) / (pi * m) * std::sin(m * pi * x);
  CHECK(sgc::kappa_tau(p, M, x) - sgc::kappa_tau(p, M, 1.0 - x) == doctest::Approx(2.0 * even).epsilon(1e-10));
  const std::vector<double> xs{0.1, 0.2, 0.3};
  const auto many = sgc::kappa_tau(p, M, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(many[i] == sgc::kappa_tau(p, M, xs[i]));
}

TEST_CASE("C^{1/2} Haar images") {
  CHECK(sgc::chalf_haar(3.0, 1, 0.0, 512) == 0.0);
  CHECK(std::abs(sgc::chalf_haar(3.0, 5, 1.0, 512)) < 1e-15);
  CHECK(std::abs(sgc::chalf_haar(3.0, 1, 0.3, 512) - sgc::chalf_haar(3.0, 1, 0.3, 256)) < 1e-4);
  // Global support: nonzero throughout the interior, even for localized wavelets.
  for (double x : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    CHECK(sgc::chalf_haar(3.0, 1, x, 512) > 0.0);
    CHECK(std::abs(sgc::chalf_haar(3.0, 9, x, 512)) > 1e-8);
  }
  // Haar is orthonormal, so the images reproduce the KL covariance with the same q.
  const double q = 2.0;
  for (double x : {0.2, 0.5}) {
    for (double y : {0.3, 0.8}) {
      double kl = 0.0;
      for (int n = 1; n <= 512; ++n) kl += 2.0 * std::pow(pi * n, -2 * q) * std::sin(pi * n * x) * std::sin(pi * n * y);
      double haar = 0.0;
      for (std::size_t m = 1; m <= 1024; ++m) haar += sgc::chalf_haar(q, m, x, 512) * sgc::chalf_haar(q, m, y, 512);
      CHECK(haar == doctest::Approx(kl).epsilon(1e-3));
    }
  }
}

TEST_CASE("covariance reconstruction") {
  CHECK(covariance_deviation(field(ExpansionKind::KL), 10000) < 5e-3);
  CHECK(covariance_deviation(field(ExpansionKind::LC), 1023) < 5e-3);  // levels 0..9 complete
  // Complete levels 0..4 reproduce the bridge covariance exactly on the 1/32 grid.
  const auto lc = field(ExpansionKind::LC);
  double worst = 0.0;
  for (int a = 0; a <= 32; ++a)
    for (int b = 0; b <= 32; ++b) {
      const double x = a / 32.0, y = b / 32.0;
      double s = 0.0;
      for (std::size_t m = 1; m <= 31; ++m) s += lc.phi(m, x) * lc.phi(m, y);
      worst = std::max(worst, std::abs(s - (std::min(x, y) - x * y)));
    }
  CHECK(worst < 1e-14);
}

TEST_CASE("sampled path variance at the midpoint") {
  const auto f = field(ExpansionKind::KL, 1.0, 3.0, 1000);
  const std::vector<double> xs{0.5};
  const auto paths = sgc::sample_paths(f, xs, 100000, 2024);
  double s = 0.0, s2 = 0.0;
  for (const auto& row : paths) {
    const double v = std::log(row[0]);
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(paths.size());
  const double var = s2 / n - (s / n) * (s / n);
  CHECK(var == doctest::Approx(9.0 / 4.0).epsilon(0.02));

  const auto again = sgc::sample_paths(f, xs, 10, 2024);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i][0] == paths[i][0]);
}

TEST_CASE("substreams") {
  auto a = sgc::substream(1, 0), b = sgc::substream(1, 0), c = sgc::substream(1, 1);
  const auto va = sgc::gaussian_vector(a, 8), vb = sgc::gaussian_vector(b, 8), vc = sgc::gaussian_vector(c, 8);
  CHECK(va == vb);
  CHECK(va != vc);
}
