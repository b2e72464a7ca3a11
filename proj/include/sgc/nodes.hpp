#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgc {

enum class NodeFamily { GaussHermite, GaussianLeja, GenzKeister };

std::string_view to_string(NodeFamily family);
/// Accepts "gh", "leja", "gk" and the full names, case-insensitive.
NodeFamily parse_family(std::string_view name);
bool is_nested(NodeFamily family);

/// Raised when a tabulated family has no rule at the requested level.
class RuleExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Univariate interpolation/quadrature rule for the standard normal measure.
struct UnivariateRule {
  NodeFamily family = NodeFamily::GaussHermite;
  int level = 0;
  std::vector<double> nodes;        // ascending
  std::vector<double> weights;      // quadrature weights, sum to 1
  std::vector<double> barycentric;  // second-kind barycentric weights, max |w| = 1
  int exactness = -1;               // highest monomial degree integrated exactly

  std::size_t size() const { return nodes.size(); }
};

/// Largest supported level (Genz-Keister tables stop at level 4).
int max_level(NodeFamily family);

/// Node count of level k: k+1 for Gauss-Hermite and Leja, 1/3/9/19/35 for
/// Genz-Keister. Throws RuleExhausted past the table.
int level_to_knots(NodeFamily family, int level);

/// n-point Gauss-Hermite rule for N(0,1), 1 <= n <= 200.
UnivariateRule gauss_hermite(int n);

/// First n Gaussian Leja nodes in generation order, 1 <= n <= 150. Computed
/// from scratch on every call.
std::vector<double> gaussian_leja(int n);

/// Log of the Leja objective exp(-x^2/4) * prod |x - nodes_i|.
double leja_log_objective(double x, std::span<const double> nodes);

/// Nested Genz-Keister rule at level 0..4 from the embedded table.
UnivariateRule genz_keister(int level);

/// w_i = integral of the i-th Lagrange basis polynomial against N(0,1).
std::vector<double> lagrange_quadrature_weights(std::span<const double> nodes);

/// Second-kind barycentric weights, scaled so that max |w_j| = 1.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// Lagrange basis values L_j(x) for all nodes of `rule`, written to `out`.
void lagrange_basis(const UnivariateRule& rule, double x, std::span<double> out);
std::vector<double> lagrange_basis(const UnivariateRule& rule, double x);

/// Cached, immutable rule for (family, level). Thread safe.
std::shared_ptr<const UnivariateRule> rule(NodeFamily family, int level);

struct GenzKeisterRecord {
  int exactness = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Plain-text table: per level a "cardinality exactness" line followed by one
/// "node weight" line per node; '#' starts a comment line.
std::vector<GenzKeisterRecord> read_genz_keister_table(std::istream& is);
void write_genz_keister_table(std::ostream& os, const std::vector<GenzKeisterRecord>& table);
/// The table compiled into the library.
const std::vector<GenzKeisterRecord>& genz_keister_table();

}  // namespace sgc
