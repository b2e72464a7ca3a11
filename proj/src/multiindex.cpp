#include "sgc/multiindex.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sgc {

MultiIndex::MultiIndex(const std::vector<int>& dense) {
  for (std::size_t m = 0; m < dense.size(); ++m) {
    if (dense[m] < 0) throw std::invalid_argument("MultiIndex: negative level");
    if (dense[m] > 0) entries_.emplace_back(m, dense[m]);
  }
}

MultiIndex MultiIndex::unit(std::size_t dim, int level) {
  MultiIndex k;
  k.set(dim, level);
  return k;
}

int MultiIndex::operator[](std::size_t dim) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const Entry& e, std::size_t d) { return e.first < d; });
  return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

void MultiIndex::set(std::size_t dim, int level) {
  if (level < 0) throw std::invalid_argument("MultiIndex: negative level");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const Entry& e, std::size_t d) { return e.first < d; });
  if (it != entries_.end() && it->first == dim) {
    if (level == 0)
      entries_.erase(it);
    else
      it->second = level;
  } else if (level > 0) {
    entries_.insert(it, {dim, level});
  }
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (const auto& [m, l] : entries_) s += l;
  return s;
}

int MultiIndex::max_component() const {
  int s = 0;
  for (const auto& [m, l] : entries_) s = std::max(s, l);
  return s;
}

MultiIndex MultiIndex::plus_unit(std::size_t dim) const {
  MultiIndex k = *this;
  k.set(dim, (*this)[dim] + 1);
  return k;
}

MultiIndex MultiIndex::minus_unit(std::size_t dim) const {
  MultiIndex k = *this;
  k.set(dim, (*this)[dim] - 1);
  return k;
}

std::vector<int> MultiIndex::dense(std::size_t dims) const {
  std::vector<int> out(std::max(dims, extent()), 0);
  for (const auto& [m, l] : entries_) out[m] = l;
  return out;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da < db;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0;
  for (; i < ea.size() && i < eb.size(); ++i) {
    if (ea[i] == eb[i]) continue;
    // First differing dimension: whoever has a positive level at the lower
    // dimension (or the larger level at the same dimension) is smaller.
    if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
    return ea[i].second > eb[i].second;
  }
  return false;  // equal degree and equal prefix means equal indices
}

std::size_t MultiIndexHash::operator()(const MultiIndex& k) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& [m, l] : k.entries()) {
    h ^= std::hash<std::size_t>{}(m * 131 + static_cast<std::size_t>(l)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

MultiIndexSet::MultiIndexSet(std::vector<MultiIndex> indices, std::size_t dimension_bound)
    : dimension_bound_(dimension_bound) {
  std::sort(indices.begin(), indices.end(), graded_lex_less);
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (const auto& k : indices) dimension_bound_ = std::max(dimension_bound_, k.extent());
  lookup_.insert(indices.begin(), indices.end());
  indices_ = std::move(indices);
}

bool MultiIndexSet::insert(const MultiIndex& k) {
  if (!lookup_.insert(k).second) return false;
  auto it = std::upper_bound(indices_.begin(), indices_.end(), k, graded_lex_less);
  indices_.insert(it, k);
  dimension_bound_ = std::max(dimension_bound_, k.extent());
  return true;
}

bool is_monotone(const MultiIndexSet& set) {
  for (const auto& k : set) {
    for (const auto& [m, l] : k.entries()) {
      if (!set.contains(k.minus_unit(m))) return false;
    }
  }
  return true;
}

bool is_admissible(const MultiIndexSet& set, const MultiIndex& k) {
  for (const auto& [m, l] : k.entries()) {
    if (!set.contains(k.minus_unit(m))) return false;
  }
  return true;
}

namespace {

void enumerate_simplex(std::vector<int>& k, std::size_t m, int remaining, std::vector<MultiIndex>& out) {
  if (m == k.size()) {
    out.emplace_back(k);
    return;
  }
  for (int l = 0; l <= remaining; ++l) {
    k[m] = l;
    enumerate_simplex(k, m + 1, remaining - l, out);
  }
  k[m] = 0;
}

}  // namespace

MultiIndexSet smolyak_set(std::size_t dims, int w) {
  if (dims == 0) throw std::invalid_argument("smolyak_set: need at least one dimension");
  if (w < 0) throw std::invalid_argument("smolyak_set: negative level budget");
  std::vector<MultiIndex> out;
  std::vector<int> k(dims, 0);
  enumerate_simplex(k, 0, w, out);
  return MultiIndexSet(std::move(out), dims);
}

MultiIndexSet reduced_margin(const MultiIndexSet& set) {
  if (!is_monotone(set)) throw std::invalid_argument("reduced_margin: set is not monotone");
  std::vector<MultiIndex> out;
  std::unordered_set<MultiIndex, MultiIndexHash> seen;
  for (const auto& k : set) {
    for (std::size_t m = 0; m < set.dimension_bound(); ++m) {
      MultiIndex cand = k.plus_unit(m);
      if (set.contains(cand) || seen.count(cand)) continue;
      if (is_admissible(set, cand)) {
        seen.insert(cand);
        out.push_back(std::move(cand));
      }
    }
  }
  return MultiIndexSet(std::move(out), set.dimension_bound());
}

std::vector<std::pair<MultiIndex, int>> combination_coefficients(const MultiIndexSet& set) {
  if (!is_monotone(set)) throw std::invalid_argument("combination_coefficients: set is not monotone");
  std::vector<std::pair<MultiIndex, int>> out;
  out.reserve(set.size());
  std::vector<std::size_t> active;
  {
    std::vector<bool> used(set.dimension_bound(), false);
    for (const auto& k : set)
      for (const auto& [m, l] : k.entries()) used[m] = true;
    for (std::size_t m = 0; m < used.size(); ++m)
      if (used[m]) active.push_back(m);
  }
  std::vector<std::size_t> forward;
  for (const auto& i : set) {
    // i + e lies in a monotone set only if every i + e_m with e_m <= e does,
    // so the sum runs over subsets of the admissible forward directions.
    forward.clear();
    for (std::size_t m : active) {
      if (set.contains(i.plus_unit(m))) forward.push_back(m);
    }
    // Depth-first over subsets in increasing direction order. If i + e is
    // missing, so is every i + e' with e' >= e, and the branch is cut.
    int c = 0;
    std::function<void(const MultiIndex&, std::size_t, int)> walk = [&](const MultiIndex& probe, std::size_t from,
                                                                        int sign) {
      c += sign;
      for (std::size_t b = from; b < forward.size(); ++b) {
        const MultiIndex next = probe.plus_unit(forward[b]);
        if (set.contains(next)) walk(next, b + 1, -sign);
      }
    };
    walk(i, 0, 1);
    out.emplace_back(i, c);
  }
  return out;
}

std::string to_string(const MultiIndex& k, std::size_t dims) {
  std::ostringstream os;
  const auto d = k.dense(dims);
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m) os << ' ';
    os << d[m] + 1;
  }
  return os.str();
}

std::string to_sparse_string(const MultiIndex& k) {
  if (k.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, l] : k.entries()) {
    if (!first) os << ';';
    first = false;
    os << m + 1 << ':' << l + 1;
  }
  return os.str();
}

void write_index_set(std::ostream& os, const MultiIndexSet& set) {
  for (const auto& k : set) os << to_string(k, set.dimension_bound()) << '\n';
}

MultiIndexSet read_index_set(std::istream& is) {
  std::vector<MultiIndex> out;
  std::size_t dims = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<int> levels;
    int v = 0;
    while (ls >> v) {
      if (v < 1) throw std::invalid_argument("read_index_set: levels are 1-based");
      levels.push_back(v - 1);
    }
    if (levels.empty()) continue;
    if (dims != 0 && levels.size() != dims) throw std::invalid_argument("read_index_set: ragged rows");
    dims = levels.size();
    out.emplace_back(levels);
  }
  return MultiIndexSet(std::move(out), dims);
}

}  // namespace sgc
