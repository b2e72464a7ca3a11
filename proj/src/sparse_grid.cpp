#include "sgc/sparse_grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sgc {

namespace {

constexpr double kPointTolerance = 1e-12;

// Odometer over a row-major tensor with the last dimension fastest.
bool advance(std::vector<std::size_t>& pos, const std::vector<std::size_t>& extents) {
  for (std::size_t d = pos.size(); d-- > 0;) {
    if (++pos[d] < extents[d]) return true;
    pos[d] = 0;
  }
  return false;
}

}  // namespace

CountStrategy parse_count_strategy(std::string_view name) {
  std::string n(name);
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "incremental") return CountStrategy::Incremental;
  if (n == "combitec") return CountStrategy::Combitec;
  throw std::invalid_argument("unknown count strategy '" + std::string(name) + "'");
}

std::string_view to_string(CountStrategy s) {
  return s == CountStrategy::Incremental ? "incremental" : "combitec";
}

std::size_t PointKeyHash::operator()(const PointKey& k) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& [m, q] : k) {
    h ^= m + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>{}(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

PointKey point_key(std::span<const double> point) {
  PointKey key;
  for (std::size_t m = 0; m < point.size(); ++m) {
    const auto q = static_cast<std::int64_t>(std::llround(point[m] / kPointTolerance));
    if (q != 0) key.emplace_back(m, q);
  }
  return key;
}

std::vector<std::vector<double>> tensor_points(const MultiIndex& index, NodeFamily family, std::size_t dims) {
  dims = std::max(dims, index.extent());
  std::vector<std::shared_ptr<const UnivariateRule>> rules;
  std::vector<std::size_t> extents;
  for (const auto& [m, l] : index.entries()) {
    rules.push_back(rule(family, l));
    extents.push_back(rules.back()->size());
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> pos(extents.size(), 0);
  do {
    std::vector<double> p(dims, 0.0);
    for (std::size_t d = 0; d < extents.size(); ++d) p[index.entries()[d].first] = rules[d]->nodes[pos[d]];
    out.push_back(std::move(p));
  } while (advance(pos, extents));
  return out;
}

SparseGrid SparseGrid::build(const MultiIndexSet& set, NodeFamily family) {
  if (set.empty()) throw std::invalid_argument("SparseGrid::build: empty index set");
  const auto coeffs = combination_coefficients(set);  // also checks monotonicity

  SparseGrid g;
  g.set_ = set;
  g.family_ = family;
  g.dims_ = std::max<std::size_t>(set.dimension_bound(), 1);
  for (const auto& k : set) g.active_extent_ = std::max(g.active_extent_, k.extent());

  std::map<std::pair<std::size_t, int>, std::size_t> slot_of;
  std::unordered_map<PointKey, std::size_t, PointKeyHash> combitec_seen;

  auto add_point = [&](const std::vector<double>& p) {
    PointKey key = point_key(p);
    auto [it, inserted] = g.lookup_.emplace(std::move(key), g.num_points_);
    if (inserted) {
      g.points_.insert(g.points_.end(), p.begin(), p.end());
      ++g.num_points_;
    }
    return it->second;
  };

  for (const auto& [index, c] : coeffs) {
    const auto pts = tensor_points(index, family, g.dims_);
    if (c == 0) {
      for (const auto& p : pts) add_point(p);
      continue;
    }
    TensorTerm t;
    t.index = index;
    t.coefficient = c;
    for (const auto& [m, l] : index.entries()) {
      t.dims.push_back(m);
      t.extents.push_back(static_cast<std::size_t>(level_to_knots(family, l)));
      auto [it, inserted] = slot_of.emplace(std::make_pair(m, l), g.slots_.size());
      if (inserted) g.slots_.emplace_back(m, l);
      t.slots.push_back(it->second);
    }
    for (const auto& p : pts) {
      const std::size_t id = add_point(p);
      t.points.push_back(id);
      combitec_seen.emplace(point_key(p), id);
    }
    g.terms_.push_back(std::move(t));
  }
  g.combitec_count_ = combitec_seen.size();

  g.slot_offsets_.resize(g.slots_.size() + 1, 0);
  for (std::size_t s = 0; s < g.slots_.size(); ++s)
    g.slot_offsets_[s + 1] = g.slot_offsets_[s] + rule(family, g.slots_[s].second)->size();

  // Quadrature weights: sum_terms c * prod_m w^{(i_m)}_{j_m}.
  g.quad_weights_.assign(g.num_points_, 0.0);
  for (const auto& t : g.terms_) {
    std::vector<std::shared_ptr<const UnivariateRule>> rules;
    for (std::size_t d = 0; d < t.dims.size(); ++d) rules.push_back(rule(family, g.slots_[t.slots[d]].second));
    std::vector<std::size_t> pos(t.dims.size(), 0);
    std::size_t flat = 0;
    do {
      double w = t.coefficient;
      for (std::size_t d = 0; d < pos.size(); ++d) w *= rules[d]->weights[pos[d]];
      g.quad_weights_[t.points[flat++]] += w;
    } while (advance(pos, t.extents));
  }
  return g;
}

std::size_t SparseGrid::find_point(std::span<const double> p) const {
  auto it = lookup_.find(point_key(p));
  return it == lookup_.end() ? npos : it->second;
}

void SparseGrid::interpolation_weights(std::span<const double> xi, std::vector<double>& w) const {
  if (xi.size() < active_extent_)
    throw std::invalid_argument("SparseGrid: evaluation point misses active dimension " +
                                std::to_string(xi.size() + 1));
  std::vector<double> basis(slot_offsets_.back());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const auto r = rule(family_, slots_[s].second);
    lagrange_basis(*r, xi[slots_[s].first],
                   std::span<double>(basis.data() + slot_offsets_[s], slot_offsets_[s + 1] - slot_offsets_[s]));
  }
  w.assign(num_points_, 0.0);
  std::vector<std::size_t> pos;
  std::vector<double> partial;  // running products along the odometer
  for (const auto& t : terms_) {
    const std::size_t nd = t.dims.size();
    if (nd == 0) {
      w[t.points[0]] += t.coefficient;
      continue;
    }
    pos.assign(nd, 0);
    partial.assign(nd + 1, 0.0);
    partial[0] = t.coefficient;
    for (std::size_t d = 0; d < nd; ++d) partial[d + 1] = partial[d] * basis[slot_offsets_[t.slots[d]]];
    std::size_t flat = 0;
    while (true) {
      w[t.points[flat++]] += partial[nd];
      std::size_t d = nd;
      while (d-- > 0) {
        if (++pos[d] < t.extents[d]) break;
        pos[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
      for (std::size_t e = d; e < nd; ++e)
        partial[e + 1] = partial[e] * basis[slot_offsets_[t.slots[e]] + pos[e]];
    }
  }
}

void SparseGrid::check_values(const GridValues& values) const {
  if (values.width == 0 || values.rows() != num_points_ || values.data.size() != num_points_ * values.width)
    throw std::invalid_argument("SparseGrid: values are not aligned with the grid points");
}

double SparseGrid::evaluate(const GridValues& values, std::span<const double> xi) const {
  if (values.width != 1) throw std::invalid_argument("SparseGrid::evaluate: scalar overload needs width 1");
  double out = 0.0;
  evaluate(values, xi, std::span<double>(&out, 1));
  return out;
}

void SparseGrid::evaluate(const GridValues& values, std::span<const double> xi, std::span<double> out) const {
  check_values(values);
  if (out.size() != values.width) throw std::invalid_argument("SparseGrid::evaluate: output width mismatch");
  std::vector<double> w;
  interpolation_weights(xi, w);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < num_points_; ++j) {
    if (w[j] == 0.0) continue;
    const auto r = values.row(j);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w[j] * r[c];
  }
}

double SparseGrid::quadrature(const GridValues& values) const {
  if (values.width != 1) throw std::invalid_argument("SparseGrid::quadrature: scalar overload needs width 1");
  double out = 0.0;
  quadrature(values, std::span<double>(&out, 1));
  return out;
}

void SparseGrid::quadrature(const GridValues& values, std::span<double> out) const {
  check_values(values);
  if (out.size() != values.width) throw std::invalid_argument("SparseGrid::quadrature: output width mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < num_points_; ++j) {
    const auto r = values.row(j);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += quad_weights_[j] * r[c];
  }
}

GridValues sample(const SparseGrid& grid, const std::function<double(std::span<const double>)>& f) {
  GridValues v = GridValues::scalar(std::vector<double>(grid.num_points()));
  const auto n = static_cast<std::ptrdiff_t>(grid.num_points());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) v.data[static_cast<std::size_t>(j)] = f(grid.point(static_cast<std::size_t>(j)));
  return v;
}

HermiteCoefficients to_hermite_coefficients(const SparseGrid& grid, const GridValues& values) {
  if (values.width == 0 || values.rows() != grid.num_points())
    throw std::invalid_argument("to_hermite: values are not aligned with the grid points");
  const std::size_t width = values.width;
  HermiteCoefficients out;
  out.indices = grid.index_set().indices();
  out.coefficients.width = width;
  out.coefficients.data.assign(out.indices.size() * width, 0.0);
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> row_of;
  for (std::size_t r = 0; r < out.indices.size(); ++r) row_of.emplace(out.indices[r], r);

  std::map<int, std::vector<std::vector<double>>> projections;  // by level
  auto projection = [&](int level) -> const std::vector<std::vector<double>>& {
    auto it = projections.find(level);
    if (it == projections.end()) it = projections.emplace(level, lagrange_to_hermite(*rule(grid.family(), level))).first;
    return it->second;
  };

  for (const auto& t : grid.terms()) {
    const std::size_t nd = t.dims.size();
    std::vector<const std::vector<std::vector<double>>*> proj(nd);
    for (std::size_t d = 0; d < nd; ++d) proj[d] = &projection(t.index[t.dims[d]]);
    // Hermite degree k_m ranges over 0..i_m even when the rule has more nodes
    // (Genz-Keister); higher coefficients of U_i f are kept too since U_i f
    // lives in the span of the first n_m Hermite polynomials.
    std::vector<std::size_t> kpos(nd, 0);
    do {
      MultiIndex k;
      for (std::size_t d = 0; d < nd; ++d) k.set(t.dims[d], static_cast<int>(kpos[d]));
      auto rit = row_of.find(k);
      if (rit == row_of.end()) {
        // Only reachable for families with more than level+1 nodes.
        rit = row_of.emplace(k, out.indices.size()).first;
        out.indices.push_back(k);
        out.coefficients.data.resize(out.indices.size() * width, 0.0);
      }
      auto dst = out.coefficients.row(rit->second);
      std::vector<std::size_t> jpos(nd, 0);
      std::size_t flat = 0;
      do {
        double w = t.coefficient;
        for (std::size_t d = 0; d < nd; ++d) w *= (*proj[d])[kpos[d]][jpos[d]];
        const auto src = values.row(t.points[flat++]);
        for (std::size_t c = 0; c < width; ++c) dst[c] += w * src[c];
      } while (advance(jpos, t.extents));
    } while (advance(kpos, t.extents));
  }
  return out;
}

HermiteExpansion to_hermite(const SparseGrid& grid, const GridValues& values) {
  if (values.width != 1) throw std::invalid_argument("to_hermite: scalar overload needs width 1");
  auto hc = to_hermite_coefficients(grid, values);
  HermiteExpansion e;
  for (std::size_t r = 0; r < hc.indices.size(); ++r) e.terms.emplace_back(hc.indices[r], hc.coefficients.data[r]);
  return e;
}

HermiteExpansion to_hermite(const SparseGrid& grid, const GridValues& values,
                            const std::function<double(std::span<const double>)>& norm) {
  auto hc = to_hermite_coefficients(grid, values);
  HermiteExpansion e;
  for (std::size_t r = 0; r < hc.indices.size(); ++r) e.terms.emplace_back(hc.indices[r], norm(hc.coefficients.row(r)));
  return e;
}

std::vector<std::pair<std::size_t, double>> best_n_term_curve(const HermiteExpansion& expansion) {
  std::vector<std::size_t> order(expansion.terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(expansion.terms[a].second);
    const double fb = std::abs(expansion.terms[b].second);
    if (fa != fb) return fa > fb;
    return graded_lex_less(expansion.terms[a].first, expansion.terms[b].first);
  });
  const std::size_t n = order.size();
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    const double f = expansion.terms[order[j]].second;
    tail[j] = tail[j + 1] + f * f;
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t j = 0; j <= n; ++j) out.emplace_back(j, std::sqrt(tail[j]));
  return out;
}

}  // namespace sgc
