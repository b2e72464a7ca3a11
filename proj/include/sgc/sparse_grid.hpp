#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgc/hermite.hpp"
#include "sgc/multiindex.hpp"
#include "sgc/nodes.hpp"

namespace sgc {

/// How collocation points are counted: |Xi_Lambda| over all of Lambda, or
/// only over tensor grids with nonzero combination coefficient.
enum class CountStrategy { Incremental, Combitec };

CountStrategy parse_count_strategy(std::string_view name);
std::string_view to_string(CountStrategy s);

/// Identity of a point: nonzero coordinates quantized to 1e-12, by dimension.
using PointKey = std::vector<std::pair<std::size_t, std::int64_t>>;

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const noexcept;
};

PointKey point_key(std::span<const double> point);

/// Cartesian product of the univariate node sets of `index`, as dense points
/// of length max(dims, index.extent()). Inactive coordinates sit at the
/// level-0 node (0 for every family). Last active dimension varies fastest.
std::vector<std::vector<double>> tensor_points(const MultiIndex& index, NodeFamily family, std::size_t dims = 0);

/// Values attached to the points of a SparseGrid: `width` numbers per point,
/// row-major. Scalar data has width 1.
struct GridValues {
  std::size_t width = 1;
  std::vector<double> data;

  static GridValues scalar(std::vector<double> v) { return {1, std::move(v)}; }
  std::size_t rows() const { return width ? data.size() / width : 0; }
  std::span<const double> row(std::size_t j) const { return {data.data() + j * width, width}; }
  std::span<double> row(std::size_t j) { return {data.data() + j * width, width}; }
};

struct TensorTerm {
  MultiIndex index;
  int coefficient = 0;
  std::vector<std::size_t> dims;     // active dimensions of `index`
  std::vector<std::size_t> slots;    // basis slot per active dimension
  std::vector<std::size_t> extents;  // node count per active dimension
  std::vector<std::size_t> points;   // grid point ids, row-major over dims
};

/// Combination-technique sparse grid over a monotone index set.
class SparseGrid {
 public:
  /// Throws std::invalid_argument for non-monotone sets; RuleExhausted if the
  /// family has no rule at a requested level.
  static SparseGrid build(const MultiIndexSet& set, NodeFamily family);

  const MultiIndexSet& index_set() const { return set_; }
  NodeFamily family() const { return family_; }
  /// Length of stored points (the set's dimension bound).
  std::size_t dims() const { return dims_; }
  /// One past the largest dimension with a positive level in the set.
  std::size_t active_extent() const { return active_extent_; }

  /// Tensor terms with nonzero combination coefficient.
  const std::vector<TensorTerm>& terms() const { return terms_; }

  std::size_t num_points() const { return num_points_; }
  std::span<const double> point(std::size_t j) const { return {points_.data() + j * dims_, dims_}; }
  /// Id of a point, or npos.
  std::size_t find_point(std::span<const double> p) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t incremental_count() const { return num_points_; }
  std::size_t combitec_count() const { return combitec_count_; }
  std::size_t count(CountStrategy s) const {
    return s == CountStrategy::Incremental ? incremental_count() : combitec_count();
  }

  /// U_Lambda f(xi) = sum_j w[j] f(point j). `w` is resized to num_points().
  void interpolation_weights(std::span<const double> xi, std::vector<double>& w) const;
  /// Quadrature weights q_j with integral of U_Lambda f = sum_j q_j f(point j).
  const std::vector<double>& quadrature_weights() const { return quad_weights_; }

  double evaluate(const GridValues& values, std::span<const double> xi) const;
  void evaluate(const GridValues& values, std::span<const double> xi, std::span<double> out) const;
  double quadrature(const GridValues& values) const;
  void quadrature(const GridValues& values, std::span<double> out) const;

 private:
  void check_values(const GridValues& values) const;

  MultiIndexSet set_;
  NodeFamily family_ = NodeFamily::GaussHermite;
  std::size_t dims_ = 0;
  std::size_t active_extent_ = 0;
  std::vector<TensorTerm> terms_;
  std::size_t num_points_ = 0;
  std::size_t combitec_count_ = 0;
  std::vector<double> points_;
  std::unordered_map<PointKey, std::size_t, PointKeyHash> lookup_;
  // Distinct (dimension, level) pairs used by terms; basis values are
  // computed once per slot per evaluation.
  std::vector<std::pair<std::size_t, int>> slots_;
  std::vector<std::size_t> slot_offsets_;
  std::vector<double> quad_weights_;
};

/// Samples `f` at every grid point (in parallel over points).
GridValues sample(const SparseGrid& grid, const std::function<double(std::span<const double>)>& f);

/// Hermite coefficients of U_Lambda f, vector valued: `coefficients` rows are
/// aligned with `indices` (which are the indices of the set, in set order).
struct HermiteCoefficients {
  std::vector<MultiIndex> indices;
  GridValues coefficients;
};

HermiteCoefficients to_hermite_coefficients(const SparseGrid& grid, const GridValues& values);

/// Scalar data: the equivalent Hermite expansion of the interpolant.
HermiteExpansion to_hermite(const SparseGrid& grid, const GridValues& values);

/// Vector data: per-coefficient norms under `norm` (e.g. H1_0 seminorm).
HermiteExpansion to_hermite(const SparseGrid& grid, const GridValues& values,
                            const std::function<double(std::span<const double>)>& norm);

/// (N, sqrt of the squared magnitudes left after keeping the N largest);
/// N = 0..size. Ties in magnitude are broken by graded-lex order.
std::vector<std::pair<std::size_t, double>> best_n_term_curve(const HermiteExpansion& expansion);

}  // namespace sgc
