#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sgc/hermite.hpp"

using sgc::NodeFamily;

TEST_CASE("hermite_eval") {
  CHECK(sgc::hermite_eval(0, 3.7) == 1.0);
  CHECK(std::abs(sgc::hermite_eval(2, 1.0)) < 1e-15);
  CHECK(sgc::hermite_eval(2, 2.0) == doctest::Approx(3.0 / std::sqrt(2.0)));
  CHECK(sgc::hermite_eval(3, 0.5) == doctest::Approx((0.125 - 1.5) / std::sqrt(6.0)));
  const auto all = sgc::hermite_all(6, 1.3);
  for (int k = 0; k <= 6; ++k) CHECK(all[k] == doctest::Approx(sgc::hermite_eval(k, 1.3)));
}

TEST_CASE("hermite_tensor_eval") {
  const std::vector<double> any{0.3, -2.0};
  CHECK(sgc::hermite_tensor_eval(sgc::MultiIndex{}, any) == 1.0);
  CHECK(sgc::hermite_tensor_eval(sgc::MultiIndex{1, 1}, std::vector<double>{2, 3}) == doctest::Approx(6.0));
  CHECK(std::abs(sgc::hermite_tensor_eval(sgc::MultiIndex{2, 0, 1}, std::vector<double>{1, 9, 2})) < 1e-15);
  CHECK_THROWS_AS(sgc::hermite_tensor_eval(sgc::MultiIndex{0, 0, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("orthonormality under 40-point Gauss-Hermite") {
  const auto r = sgc::gauss_hermite(40);
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b) {
      double g = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) g += r.weights[q] * sgc::hermite_eval(a, r.nodes[q]) * sgc::hermite_eval(b, r.nodes[q]);
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("expansion norm and evaluation") {
  sgc::HermiteExpansion e;
  e.terms = {{sgc::MultiIndex{}, 3.0}, {sgc::MultiIndex::unit(0), 4.0}};
  CHECK(e.l2_norm() == doctest::Approx(5.0));
  CHECK(e.evaluate(std::vector<double>{0.5}) == doctest::Approx(5.0));
}

TEST_CASE("detail norms: small cases") {
  for (auto family : {NodeFamily::GaussHermite, NodeFamily::GaussianLeja}) {
    const auto d0 = sgc::delta_norms(family, 0);
    CHECK(d0[0] == doctest::Approx(1.0));
    CHECK(d0[1] < 1e-14);
  }
  const auto d1 = sgc::delta_norms(NodeFamily::GaussHermite, 1);
  CHECK(d1[0] < 1e-14);
  CHECK(d1[1] == doctest::Approx(1.0));
  CHECK(d1[2] < 1e-12);
}

TEST_CASE("detail operators vanish beyond the polynomial degree") {
  for (auto family : {NodeFamily::GaussHermite, NodeFamily::GaussianLeja}) {
    for (int k = 0; k <= 20; ++k) {
      const auto d = sgc::delta_norms(family, k);
      // i = k + 1; rounding scales with the sampled values of H_k.
      double scale = 1.0;
      for (double x : sgc::rule(family, k + 1)->nodes) scale = std::max(scale, std::abs(sgc::hermite_eval(k, x)));
      CHECK(d.back() < 1e-12 * scale);
    }
  }
}

TEST_CASE("detail norms against direct quadrature") {
  // ||Delta_i H_k||^2 by a large Gauss-Hermite rule applied to the
  // interpolants evaluated through the Lagrange basis.
  const auto big = sgc::gauss_hermite(60);
  for (auto family : {NodeFamily::GaussHermite, NodeFamily::GaussianLeja}) {
    const int k = 7;
    const auto d = sgc::delta_norms(family, k);
    for (int i = 1; i <= k; ++i) {
      const auto ri = sgc::rule(family, i), rp = sgc::rule(family, i - 1);
      double s = 0.0;
      for (std::size_t q = 0; q < big.size(); ++q) {
        const auto bi = sgc::lagrange_basis(*ri, big.nodes[q]);
        const auto bp = sgc::lagrange_basis(*rp, big.nodes[q]);
        double v = 0.0;
        for (std::size_t j = 0; j < bi.size(); ++j) v += bi[j] * sgc::hermite_eval(k, ri->nodes[j]);
        for (std::size_t j = 0; j < bp.size(); ++j) v -= bp[j] * sgc::hermite_eval(k, rp->nodes[j]);
        s += big.weights[q] * v * v;
      }
      CHECK(d[i] == doctest::Approx(std::sqrt(s)).epsilon(1e-8));
    }
  }
}

TEST_CASE("delta_norm_profile rejects Genz-Keister") {
  CHECK_THROWS_AS(sgc::delta_norm_profile(NodeFamily::GenzKeister, 3), std::invalid_argument);
  const auto p = sgc::delta_norm_profile(NodeFamily::GaussHermite, 5);
  CHECK(p.size() == 6);
  CHECK(p[0].max_norm == doctest::Approx(1.0));
}
