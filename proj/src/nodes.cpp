#include "sgc/nodes.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <sstream>

#include "sgc/linalg.hpp"

namespace sgc {

extern const char* const kGenzKeisterTableText;  // generated from data/genz_keister.txt

namespace {

constexpr int kMaxGaussHermite = 200;
constexpr int kMaxLeja = 150;
constexpr std::array<int, 5> kGenzKeisterSizes = {1, 3, 9, 19, 35};

// Leja candidate grid: uniform, symmetric about 0, spacing 4e-4.
constexpr double kLejaHalfWidth = 32.0;
constexpr int kLejaHalfCells = 80000;
constexpr double kGolden = 0.6180339887498949;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Orthonormal Hermite values p_{n-1}(x), p_n(x).
std::pair<double, double> hermite_pair(int n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

double golden_max(double a, double b, std::span<const double> nodes) {
  const double a0 = a, b0 = b;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = leja_log_objective(x1, nodes);
  double f2 = leja_log_objective(x2, nodes);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = leja_log_objective(x2, nodes);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = leja_log_objective(x1, nodes);
    }
  }
  // Golden section only resolves a flat maximum to ~sqrt(eps); finish with
  // Newton on the derivative -x/2 + sum 1/(x - x_i), staying in [lo, hi].
  const double lo = a0, hi = b0;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 8; ++it) {
    double g = -0.5 * x, h = -0.5;
    for (double xi : nodes) {
      const double d = x - xi;
      g += 1.0 / d;
      h -= 1.0 / (d * d);
    }
    const double step = g / h;
    const double y = x - step;
    if (!(y > lo && y < hi)) break;
    x = y;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

UnivariateRule finish_rule(NodeFamily family, int level, std::vector<double> nodes, std::vector<double> weights,
                           int exactness) {
  UnivariateRule r;
  r.family = family;
  r.level = level;
  r.nodes = std::move(nodes);
  r.weights = std::move(weights);
  r.barycentric = barycentric_weights(r.nodes);
  r.exactness = exactness;
  return r;
}

}  // namespace

std::string_view to_string(NodeFamily family) {
  switch (family) {
    case NodeFamily::GaussHermite: return "GaussHermite";
    case NodeFamily::GaussianLeja: return "GaussianLeja";
    case NodeFamily::GenzKeister: return "GenzKeister";
  }
  return "?";
}

NodeFamily parse_family(std::string_view name) {
  const std::string n = lower(name);
  if (n == "gh" || n == "gausshermite" || n == "gauss-hermite") return NodeFamily::GaussHermite;
  if (n == "leja" || n == "lj" || n == "gaussianleja") return NodeFamily::GaussianLeja;
  if (n == "gk" || n == "genzkeister" || n == "genz-keister") return NodeFamily::GenzKeister;
  throw std::invalid_argument("unknown node family '" + std::string(name) + "'");
}

bool is_nested(NodeFamily family) { return family != NodeFamily::GaussHermite; }

int max_level(NodeFamily family) {
  switch (family) {
    case NodeFamily::GaussHermite: return kMaxGaussHermite - 1;
    case NodeFamily::GaussianLeja: return kMaxLeja - 1;
    case NodeFamily::GenzKeister: return static_cast<int>(kGenzKeisterSizes.size()) - 1;
  }
  return 0;
}

int level_to_knots(NodeFamily family, int level) {
  if (level < 0) throw std::invalid_argument("level_to_knots: negative level");
  if (level > max_level(family))
    throw RuleExhausted(std::string(to_string(family)) + ": rule exhausted at level " + std::to_string(level));
  if (family == NodeFamily::GenzKeister) return kGenzKeisterSizes[static_cast<std::size_t>(level)];
  return level + 1;
}

UnivariateRule gauss_hermite(int n) {
  if (n < 1 || n > kMaxGaussHermite) throw std::invalid_argument("gauss_hermite: need 1 <= n <= 200");
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int m = 1; m < n; ++m) off[static_cast<std::size_t>(m - 1)] = std::sqrt(static_cast<double>(m));
  std::vector<double> x = tridiagonal_eigenvalues(diag, off);

  // Newton polish on p_n, p_n' = sqrt(n) p_{n-1}.
  for (double& xi : x) {
    for (int it = 0; it < 3; ++it) {
      auto [pm1, pn] = hermite_pair(n, xi);
      const double dx = pn / (std::sqrt(static_cast<double>(n)) * pm1);
      xi -= dx;
      if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(xi))) break;
    }
  }
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < un / 2; ++i) {
    const double a = 0.5 * (x[un - 1 - i] - x[i]);
    x[i] = -a;
    x[un - 1 - i] = a;
  }
  if (un % 2 == 1) x[un / 2] = 0.0;

  std::vector<double> w(un);
  for (std::size_t i = 0; i < un; ++i) {
    const double pm1 = hermite_pair(n, x[i]).first;
    w[i] = 1.0 / (n * pm1 * pm1);
  }
  for (std::size_t i = 0; i < un / 2; ++i) {
    const double a = 0.5 * (w[i] + w[un - 1 - i]);
    w[i] = w[un - 1 - i] = a;
  }
  return finish_rule(NodeFamily::GaussHermite, n - 1, std::move(x), std::move(w), 2 * n - 1);
}

double leja_log_objective(double x, std::span<const double> nodes) {
  double v = -0.25 * x * x;
  for (double xi : nodes) v += std::log(std::abs(x - xi));
  return v;
}

std::vector<double> gaussian_leja(int n) {
  if (n < 1 || n > kMaxLeja) throw std::invalid_argument("gaussian_leja: need 1 <= n <= 150");
  const double h = kLejaHalfWidth / kLejaHalfCells;
  const int cells = 2 * kLejaHalfCells + 1;
  std::vector<double> grid(static_cast<std::size_t>(cells));
  std::vector<double> obj(static_cast<std::size_t>(cells));
  for (int g = 0; g < cells; ++g) {
    const double x = (g - kLejaHalfCells) * h;
    grid[static_cast<std::size_t>(g)] = x;
    obj[static_cast<std::size_t>(g)] = -0.25 * x * x;
  }
  std::vector<double> seq{0.0};
  auto absorb = [&](double xi) {
    for (std::size_t g = 0; g < grid.size(); ++g) obj[g] += std::log(std::abs(grid[g] - xi));
  };
  absorb(0.0);

  while (static_cast<int>(seq.size()) < n) {
    // Best grid cell on each side of the origin, refined; positive wins ties.
    std::size_t best_neg = 0;
    std::size_t best_pos = grid.size() - 1;
    for (std::size_t g = 1; g < grid.size() - 1; ++g) {
      if (grid[g] < 0.0 && obj[g] > obj[best_neg]) best_neg = g;
      if (grid[g] > 0.0 && obj[g] > obj[best_pos]) best_pos = g;
    }
    const double xn = golden_max(grid[best_neg - 1], grid[best_neg + 1], seq);
    const double xp = golden_max(grid[best_pos - 1], grid[best_pos + 1], seq);
    const double fn = leja_log_objective(xn, seq);
    const double fp = leja_log_objective(xp, seq);
    const double next = (fn > fp + 1e-12 * std::max(1.0, std::abs(fp))) ? xn : xp;
    seq.push_back(next);
    absorb(next);
  }
  return seq;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> logw(n, 0.0);
  std::vector<double> sign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = nodes[j] - nodes[k];
      if (d == 0.0) throw std::invalid_argument("barycentric_weights: repeated node");
      logw[j] -= std::log(std::abs(d));
      if (d < 0) sign[j] = -sign[j];
    }
  }
  const double top = n ? *std::max_element(logw.begin(), logw.end()) : 0.0;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - top);
  return w;
}

void lagrange_basis(const UnivariateRule& rule, double x, std::span<double> out) {
  const std::size_t n = rule.nodes.size();
  if (out.size() != n) throw std::invalid_argument("lagrange_basis: output size mismatch");
  if (n == 1) {
    out[0] = 1.0;
    return;
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = x - rule.nodes[j];
    if (d == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      out[j] = 1.0;
      return;
    }
    out[j] = rule.barycentric[j] / d;
    denom += out[j];
  }
  for (auto& v : out) v /= denom;
}

std::vector<double> lagrange_basis(const UnivariateRule& rule, double x) {
  std::vector<double> out(rule.nodes.size());
  lagrange_basis(rule, x, out);
  return out;
}

std::vector<double> lagrange_quadrature_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) return {};
  // Each L_i has degree n-1; a Gauss-Hermite rule with n points is exact up to 2n-1.
  const UnivariateRule gh = gauss_hermite(static_cast<int>(n));
  UnivariateRule tmp;
  tmp.nodes.assign(nodes.begin(), nodes.end());
  tmp.barycentric = barycentric_weights(tmp.nodes);
  std::vector<double> w(n, 0.0);
  std::vector<double> basis(n);
  for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
    lagrange_basis(tmp, gh.nodes[q], basis);
    for (std::size_t i = 0; i < n; ++i) w[i] += gh.weights[q] * basis[i];
  }
  return w;
}

std::vector<GenzKeisterRecord> read_genz_keister_table(std::istream& is) {
  std::vector<GenzKeisterRecord> out;
  std::string line;
  auto next_line = [&](std::string& dst) {
    while (std::getline(is, dst)) {
      const auto p = dst.find_first_not_of(" \t\r");
      if (p == std::string::npos || dst[p] == '#') continue;
      return true;
    }
    return false;
  };
  while (next_line(line)) {
    std::istringstream hs(line);
    int count = 0;
    GenzKeisterRecord rec;
    if (!(hs >> count >> rec.exactness) || count < 1)
      throw std::runtime_error("genz-keister table: bad record header '" + line + "'");
    for (int i = 0; i < count; ++i) {
      if (!next_line(line)) throw std::runtime_error("genz-keister table: truncated record");
      std::istringstream ns(line);
      double x = 0.0;
      double w = 0.0;
      if (!(ns >> x >> w)) throw std::runtime_error("genz-keister table: bad node line '" + line + "'");
      rec.nodes.push_back(x);
      rec.weights.push_back(w);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_genz_keister_table(std::ostream& os, const std::vector<GenzKeisterRecord>& table) {
  os << std::setprecision(17);
  for (const auto& rec : table) {
    os << rec.nodes.size() << ' ' << rec.exactness << '\n';
    for (std::size_t i = 0; i < rec.nodes.size(); ++i) os << rec.nodes[i] << ' ' << rec.weights[i] << '\n';
  }
}

const std::vector<GenzKeisterRecord>& genz_keister_table() {
  static const std::vector<GenzKeisterRecord> table = [] {
    std::istringstream is(kGenzKeisterTableText);
    auto t = read_genz_keister_table(is);
    if (t.size() != kGenzKeisterSizes.size()) throw std::runtime_error("genz-keister table: wrong level count");
    for (std::size_t l = 0; l < t.size(); ++l) {
      if (t[l].nodes.size() != static_cast<std::size_t>(kGenzKeisterSizes[l]))
        throw std::runtime_error("genz-keister table: wrong cardinality");
    }
    return t;
  }();
  return table;
}

UnivariateRule genz_keister(int level) {
  level_to_knots(NodeFamily::GenzKeister, level);  // range check
  const auto& rec = genz_keister_table()[static_cast<std::size_t>(level)];
  return finish_rule(NodeFamily::GenzKeister, level, rec.nodes, rec.weights, rec.exactness);
}

std::shared_ptr<const UnivariateRule> rule(NodeFamily family, int level) {
  static std::shared_mutex mutex;
  static std::map<std::pair<NodeFamily, int>, std::shared_ptr<const UnivariateRule>> cache;
  static std::vector<double> leja;
  const auto key = std::make_pair(family, level);
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  level_to_knots(family, level);  // throws past the last level
  std::unique_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::shared_ptr<const UnivariateRule> r;
  switch (family) {
    case NodeFamily::GaussHermite:
      r = std::make_shared<const UnivariateRule>(gauss_hermite(level + 1));
      break;
    case NodeFamily::GenzKeister:
      r = std::make_shared<const UnivariateRule>(genz_keister(level));
      break;
    case NodeFamily::GaussianLeja: {
      if (leja.empty()) leja = gaussian_leja(kMaxLeja);
      std::vector<double> nodes(leja.begin(), leja.begin() + level + 1);
      std::sort(nodes.begin(), nodes.end());
      auto w = lagrange_quadrature_weights(nodes);
      r = std::make_shared<const UnivariateRule>(
          finish_rule(NodeFamily::GaussianLeja, level, std::move(nodes), std::move(w), level));
      break;
    }
  }
  cache.emplace(key, r);
  return r;
}

}  // namespace sgc
