#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sgc {

/// Finitely supported multi-index. Dimensions are 0-based internally; only
/// strictly positive levels are stored, sorted by dimension, so equality is
/// structural.
class MultiIndex {
 public:
  using Entry = std::pair<std::size_t, int>;  // (dimension, level > 0)

  MultiIndex() = default;
  /// Dense construction; trailing and interior zeros are dropped.
  explicit MultiIndex(const std::vector<int>& dense);
  MultiIndex(std::initializer_list<int> dense) : MultiIndex(std::vector<int>(dense)) {}

  static MultiIndex unit(std::size_t dim, int level = 1);

  int operator[](std::size_t dim) const;
  void set(std::size_t dim, int level);

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  /// Number of nonzero entries (|k|_0).
  std::size_t support_size() const { return entries_.size(); }
  /// One past the largest active dimension; 0 for the zero index.
  std::size_t extent() const { return entries_.empty() ? 0 : entries_.back().first + 1; }
  int total_degree() const;
  int max_component() const;

  MultiIndex plus_unit(std::size_t dim) const;
  /// Caller guarantees (*this)[dim] > 0.
  MultiIndex minus_unit(std::size_t dim) const;

  std::vector<int> dense(std::size_t dims) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Graded lexicographic order: total degree ascending, then the index with
/// the larger level in the lowest differing dimension comes first, so
/// e_1 < e_2 < ... within a degree.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return graded_lex_less(a, b); }
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& k) const noexcept;
};

/// Finite set of distinct multi-indices kept in graded-lex order, with an
/// explicit dimension bound (indices never use dimensions >= bound).
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(std::vector<MultiIndex> indices, std::size_t dimension_bound);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t dimension_bound() const { return dimension_bound_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(const MultiIndex& k) const { return lookup_.count(k) != 0; }
  /// Returns false when already present. Raises the dimension bound if needed.
  bool insert(const MultiIndex& k);

 private:
  std::vector<MultiIndex> indices_;
  std::unordered_set<MultiIndex, MultiIndexHash> lookup_;
  std::size_t dimension_bound_ = 0;
};

bool is_monotone(const MultiIndexSet& set);

/// {k in N_0^dims : |k|_1 <= w} (0-based levels).
MultiIndexSet smolyak_set(std::size_t dims, int w);

/// Indices outside a monotone set whose backward neighbours all lie inside,
/// restricted to the set's dimension bound. Throws std::invalid_argument on
/// non-monotone input.
MultiIndexSet reduced_margin(const MultiIndexSet& set);

/// Forward neighbour k + e_m is admissible for a monotone set when all of its
/// backward neighbours are in the set.
bool is_admissible(const MultiIndexSet& set, const MultiIndex& k);

/// c(i; set) = sum over e in {0,1}^dims with i + e in set of (-1)^|e|.
/// Entries are returned for every index of the set (zeros included), in set
/// order. Throws std::invalid_argument on non-monotone input.
std::vector<std::pair<MultiIndex, int>> combination_coefficients(const MultiIndexSet& set);

/// One index per line, space-separated 1-based levels over the dimension bound.
void write_index_set(std::ostream& os, const MultiIndexSet& set);
MultiIndexSet read_index_set(std::istream& is);

/// Dense 1-based rendering over `dims` dimensions, space separated.
std::string to_string(const MultiIndex& k, std::size_t dims);
/// Sparse 1-based rendering "dim:level;dim:level" of the active entries, "0"
/// for the zero index.
std::string to_sparse_string(const MultiIndex& k);

}  // namespace sgc
