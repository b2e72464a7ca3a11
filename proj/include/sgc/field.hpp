#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sgc {

enum class ExpansionKind { KL, LC, HaarChalf };

ExpansionKind parse_expansion_kind(std::string_view name);
std::string_view to_string(ExpansionKind kind);

/// log a(x) = sum_{m=1}^{M} phi_m(x) xi_m for the (smoothed) Brownian bridge
/// on [0,1]; the mean phi_0 is identically zero.
struct FieldExpansion {
  ExpansionKind kind = ExpansionKind::KL;
  double q = 1.0;             // smoothness exponent (KL, HaarChalf)
  double sigma = 1.0;         // multiplies every phi_m
  std::size_t truncation = 1000;
  // Amplitude of the LC hats. 1/2 makes LC and KL (q = 1) the same field:
  // with unit hats Var B(1/2) would be 1 instead of 1/4.
  double lc_scale = 0.5;
  std::size_t chalf_series = 512;  // sine terms in the C^{1/2} Haar images

  /// phi_m(x), m >= 1, x in [0,1]. Throws std::invalid_argument otherwise.
  double phi(std::size_t m, double x) const;
  /// ||phi_m||_{L^inf(0,1)}; sampled on a fine grid for HaarChalf.
  double phi_sup(std::size_t m) const;
  /// Requires xi.size() >= truncation.
  double log_a(std::span<const double> xi, double x) const;
  double a(std::span<const double> xi, double x) const;
};

/// Hat function max(0, 1 - |2x - 1|).
double lc_hat(double x);

/// (C^{1/2} psi_m)(x) for the smoothed bridge with exponent q, where psi_1 is
/// the indicator of [0,1] and psi_m, m >= 2, is the Haar wavelet with
/// m - 1 = 2^l + j. Series truncated after `terms` sine modes.
double chalf_haar(double q, std::size_t m, double x, std::size_t terms);

/// sum_{m<=M} lambda_m / sum_m lambda_m with lambda_m = (pi m)^{-2q}.
double variance_coverage(double q, std::size_t M);

/// sum_{m=1}^{M} m^{1/p} sqrt(2)/(pi m) sin(m pi x), compensated summation.
double kappa_tau(double p, std::size_t M, double x);
/// kappa_tau at many x, parallel over x.
std::vector<double> kappa_tau(double p, std::size_t M, std::span<const double> xs);

/// Independent engine for task `stream` derived from a master seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

/// `n` i.i.d. N(0,1) draws.
std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t n);

/// Realizations a(x_j, omega_s) on the given grid; row s holds sample s.
std::vector<std::vector<double>> sample_paths(const FieldExpansion& field, std::span<const double> xs,
                                              std::size_t samples, std::uint64_t seed);

}  // namespace sgc
