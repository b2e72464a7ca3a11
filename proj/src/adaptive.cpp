#include "sgc/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sgc {

double CollocationModel::value_norm(std::span<const double> v) const {
  if (norm) return norm(v);
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

CollocationModel scalar_model(std::size_t dims, std::function<double(std::span<const double>)> f) {
  CollocationModel m;
  m.dims = dims;
  m.width = 1;
  m.evaluate = [f = std::move(f)](std::span<const double> xi, std::span<double> out) { out[0] = f(xi); };
  return m;
}

std::size_t EvaluationCache::ensure(const std::vector<std::vector<double>>& points) {
  std::vector<const std::vector<double>*> todo;
  std::vector<PointKey> keys;
  std::unordered_set<PointKey, PointKeyHash> batch;
  for (const auto& p : points) {
    auto key = point_key(p);
    if (index_.count(key) || !batch.insert(key).second) continue;
    todo.push_back(&p);
    keys.push_back(std::move(key));
  }
  if (todo.empty()) return 0;
  const std::size_t w = model_->width;
  std::vector<double> vals(todo.size() * w);
  std::vector<double> xi;
  const auto n = static_cast<std::ptrdiff_t>(todo.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic) private(xi)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const auto& p = *todo[static_cast<std::size_t>(t)];
    xi.assign(model_->dims, 0.0);
    std::copy_n(p.begin(), std::min(p.size(), xi.size()), xi.begin());
    try {
      model_->evaluate(xi, std::span<double>(vals.data() + static_cast<std::size_t>(t) * w, w));
    } catch (const std::exception& e) {
#pragma omp critical(sgc_cache_failure)
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw std::runtime_error("model evaluation failed: " + failure);
  for (std::size_t t = 0; t < todo.size(); ++t) index_.emplace(std::move(keys[t]), index_.size());
  data_.insert(data_.end(), vals.begin(), vals.end());
  return todo.size();
}

const double* EvaluationCache::find(const PointKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : data_.data() + it->second * model_->width;
}

GridValues EvaluationCache::values_for(const SparseGrid& grid) const {
  GridValues v;
  v.width = model_->width;
  v.data.resize(grid.num_points() * v.width);
  for (std::size_t j = 0; j < grid.num_points(); ++j) {
    const double* src = find(point_key(grid.point(j)));
    if (!src) throw std::logic_error("EvaluationCache: grid point was never evaluated");
    std::copy_n(src, v.width, v.data.begin() + static_cast<std::ptrdiff_t>(j * v.width));
  }
  return v;
}

ProfitKind parse_profit(std::string_view name) {
  std::string n(name);
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "error") return ProfitKind::Error;
  if (n == "error_per_work") return ProfitKind::ErrorPerWork;
  throw std::invalid_argument("unknown profit '" + std::string(name) + "'");
}

std::string_view to_string(ProfitKind p) { return p == ProfitKind::Error ? "error" : "error_per_work"; }

std::vector<std::vector<double>> probe_set(std::size_t dims, std::size_t samples, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = substream(seed, s);
    out.push_back(gaussian_vector(rng, dims));
  }
  return out;
}

double error_indicator(const CollocationModel& model, const EvaluationCache& cache, NodeFamily family,
                       const MultiIndex& i, const std::vector<std::vector<double>>& probes) {
  const std::size_t w = model.width;
  const std::size_t np = probes.size();
  std::vector<double> acc(np * w, 0.0);
  const auto& ent = i.entries();
  const std::size_t s = ent.size();

  for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
    const double sign = (std::popcount(mask) % 2) ? -1.0 : 1.0;
    std::vector<std::shared_ptr<const UnivariateRule>> rules(s);
    std::vector<std::size_t> extents(s);
    for (std::size_t d = 0; d < s; ++d) {
      rules[d] = rule(family, ent[d].second - static_cast<int>((mask >> d) & 1));
      extents[d] = rules[d]->size();
    }
    // Values on the tensor grid, last dimension fastest.
    std::vector<const double*> vals;
    std::vector<std::size_t> pos(s, 0);
    while (true) {
      PointKey key;
      for (std::size_t d = 0; d < s; ++d) {
        const auto q = point_key(std::span<const double>(&rules[d]->nodes[pos[d]], 1));
        if (!q.empty()) key.emplace_back(ent[d].first, q.front().second);
      }
      const double* v = cache.find(key);
      if (!v) throw std::logic_error("error_indicator: tensor point missing from cache");
      vals.push_back(v);
      std::size_t d = s;
      while (d-- > 0) {
        if (++pos[d] < extents[d]) break;
        pos[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
    }

    const auto npl = static_cast<std::ptrdiff_t>(np);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t pp = 0; pp < npl; ++pp) {
      const auto p = static_cast<std::size_t>(pp);
      std::vector<std::vector<double>> basis(s);
      for (std::size_t d = 0; d < s; ++d) basis[d] = lagrange_basis(*rules[d], probes[p][ent[d].first]);
      std::vector<std::size_t> q(s, 0);
      double* out = acc.data() + p * w;
      for (std::size_t flat = 0; flat < vals.size(); ++flat) {
        double c = sign;
        for (std::size_t d = 0; d < s; ++d) c *= basis[d][q[d]];
        for (std::size_t k = 0; k < w; ++k) out[k] += c * vals[flat][k];
        std::size_t d = s;
        while (d-- > 0) {
          if (++q[d] < extents[d]) break;
          q[d] = 0;
        }
      }
    }
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    const double nv = model.value_norm(std::span<const double>(acc.data() + p * w, w));
    sum += nv * nv;
  }
  return np ? std::sqrt(sum / static_cast<double>(np)) : 0.0;
}

namespace {

std::vector<PointKey> tensor_keys(const MultiIndex& i, NodeFamily family) {
  std::vector<PointKey> out;
  for (const auto& p : tensor_points(i, family)) out.push_back(point_key(p));
  return out;
}

}  // namespace

std::size_t count_points(const MultiIndexSet& set, NodeFamily family, CountStrategy strategy) {
  std::unordered_set<PointKey, PointKeyHash> seen;
  if (strategy == CountStrategy::Incremental) {
    for (const auto& k : set)
      for (auto& key : tensor_keys(k, family)) seen.insert(std::move(key));
  } else {
    for (const auto& [k, c] : combination_coefficients(set)) {
      if (c == 0) continue;
      for (auto& key : tensor_keys(k, family)) seen.insert(std::move(key));
    }
  }
  return seen.size();
}

AdaptiveState run_a_posteriori(const CollocationModel& model, EvaluationCache& cache, const AdaptiveOptions& options,
                               const std::function<void(const AdaptiveState&)>& observer) {
  if (options.budget < 1) throw std::invalid_argument("run_a_posteriori: budget must be positive");
  if (options.buffer_size < 1) throw std::invalid_argument("run_a_posteriori: buffer_size must be positive");
  const NodeFamily family = options.family;
  const std::size_t dims = model.dims;
  const auto probes = probe_set(dims, options.probe_samples, options.probe_seed);

  AdaptiveState st;
  st.active = MultiIndexSet({MultiIndex{}}, dims);
  cache.ensure(tensor_points(MultiIndex{}, family, dims));
  std::unordered_set<PointKey, PointKeyHash> iset_points;
  for (auto& key : tensor_keys(MultiIndex{}, family)) iset_points.insert(std::move(key));

  std::size_t next_fresh = 0;
  for (; next_fresh < std::min(options.buffer_size, dims); ++next_fresh) st.buffer.push_back(next_fresh);

  auto in_margin = [&](const MultiIndex& k) {
    return std::any_of(st.margin.begin(), st.margin.end(), [&](const MarginEntry& e) { return e.index == k; });
  };
  auto add_candidate = [&](const MultiIndex& k) {
    for (const auto& [m, l] : k.entries()) {
      if (l > max_level(family)) {
        st.saturated.push_back(k);
        return;
      }
    }
    MarginEntry e;
    e.index = k;
    e.new_points = cache.ensure(tensor_points(k, family, dims));
    e.indicator = error_indicator(model, cache, family, k, probes);
    e.profit = options.profit == ProfitKind::Error
                   ? e.indicator
                   : e.indicator / static_cast<double>(std::max<std::size_t>(e.new_points, 1));
    auto it = std::upper_bound(st.margin.begin(), st.margin.end(), e,
                               [](const MarginEntry& a, const MarginEntry& b) { return graded_lex_less(a.index, b.index); });
    st.margin.insert(it, std::move(e));
  };

  for (std::size_t m : st.buffer) add_candidate(MultiIndex::unit(m));
  st.work = cache.size();

  const bool nested = is_nested(family);
  std::set<std::size_t> active_dims;
  auto record = [&](std::size_t iteration, const MultiIndex& nu) {
    TraceRecord r;
    r.iteration = iteration;
    r.selected = nu;
    r.max_component = nu.max_component() + 1;
    r.active_dims = active_dims.size();
    r.margin_size = st.margin.size();
    r.work_incremental_iset = iset_points.size();
    r.work_incremental_gset = cache.size();
    if (nested) {
      r.work_combitec_iset = r.work_incremental_iset;
      r.work_combitec_gset = r.work_incremental_gset;
    } else {
      MultiIndexSet g = st.active;
      for (const auto& e : st.margin) g.insert(e.index);
      r.work_combitec_iset = count_points(st.active, family, CountStrategy::Combitec);
      r.work_combitec_gset = count_points(g, family, CountStrategy::Combitec);
    }
    for (const auto& e : st.margin) r.error_estimate += e.indicator;
    st.trace.push_back(r);
    if (observer) observer(st);
  };
  record(0, MultiIndex{});

  std::size_t iteration = 0;
  while (!st.margin.empty() && cache.size() < options.budget) {
    double max_indicator = 0.0;
    for (const auto& e : st.margin) max_indicator = std::max(max_indicator, e.indicator);
    if (max_indicator <= options.tolerance) break;

    // Margin is in graded-lex order, so the first maximum wins ties.
    std::size_t best = 0;
    for (std::size_t j = 1; j < st.margin.size(); ++j)
      if (st.margin[j].profit > st.margin[best].profit) best = j;
    const MultiIndex nu = st.margin[best].index;
    st.margin.erase(st.margin.begin() + static_cast<std::ptrdiff_t>(best));
    st.active.insert(nu);
    for (auto& key : tensor_keys(nu, family)) iset_points.insert(std::move(key));

    std::vector<std::size_t> opened;
    for (const auto& [m, l] : nu.entries()) {
      if (active_dims.insert(m).second) {
        auto bit = std::find(st.buffer.begin(), st.buffer.end(), m);
        if (bit != st.buffer.end()) st.buffer.erase(bit);
        if (next_fresh < dims) {
          st.buffer.push_back(next_fresh);
          opened.push_back(next_fresh);
          ++next_fresh;
        }
      }
    }
    for (std::size_t m : active_dims) {
      const MultiIndex k = nu.plus_unit(m);
      if (!st.active.contains(k) && !in_margin(k) && is_admissible(st.active, k)) add_candidate(k);
    }
    for (std::size_t m : opened) add_candidate(MultiIndex::unit(m));
    st.work = cache.size();
    record(++iteration, nu);
  }
  return st;
}

std::vector<double> a_priori_rates(const FieldExpansion& field) {
  std::vector<double> r(field.truncation);
  for (std::size_t m = 0; m < r.size(); ++m) r[m] = std::min(0.5, field.phi_sup(m + 1) / 2.0);
  return r;
}

MultiIndexSet a_priori_set(const FieldExpansion& field, std::size_t N) {
  const auto r = a_priori_rates(field);
  return a_priori_set(r, N);
}

MultiIndexSet a_priori_set(std::span<const double> rates, std::size_t N) {
  if (N == 0) throw std::invalid_argument("a_priori_set: N must be positive");
  const std::size_t dims = rates.size();
  std::vector<double> logr(dims);
  for (std::size_t m = 0; m < dims; ++m) {
    if (!(rates[m] > 0.0)) throw std::invalid_argument("a_priori_set: rates must be positive");
    logr[m] = std::log(rates[m]);
  }
  auto log_profit = [&](const MultiIndex& k) {
    double s = 0.0;
    for (const auto& [m, l] : k.entries()) s += l * logr[m];
    return s;
  };

  MultiIndexSet set({MultiIndex{}}, dims);
  std::vector<std::pair<MultiIndex, double>> cand;
  std::size_t opened = 0;  // dimensions 0..opened-1 may carry positive levels
  auto open_next = [&]() {
    if (opened < dims) {
      const MultiIndex k = MultiIndex::unit(opened);
      cand.emplace_back(k, log_profit(k));
      ++opened;
    }
  };
  open_next();
  while (set.size() < N && !cand.empty()) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < cand.size(); ++j) {
      const double d = cand[j].second - cand[best].second;
      if (d > 1e-12 || (std::abs(d) <= 1e-12 && graded_lex_less(cand[j].first, cand[best].first))) best = j;
    }
    const MultiIndex k = cand[best].first;
    cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(best));
    set.insert(k);
    if (k.extent() == opened) open_next();
    for (std::size_t m = 0; m < opened; ++m) {
      const MultiIndex f = k.plus_unit(m);
      if (set.contains(f) || !is_admissible(set, f)) continue;
      if (std::any_of(cand.begin(), cand.end(), [&](const auto& c) { return c.first == f; })) continue;
      cand.emplace_back(f, log_profit(f));
    }
  }
  return set;
}

std::string trace_csv_header() {
  return "iteration,selected_index,max_component,active_dims,margin_size,work_incremental_Iset,"
         "work_incremental_Gset,work_combitec_Iset,work_combitec_Gset,error_estimate";
}

std::string trace_csv_row(const TraceRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.iteration << ',' << to_sparse_string(r.selected) << ',' << r.max_component << ',' << r.active_dims << ','
     << r.margin_size << ',' << r.work_incremental_iset << ',' << r.work_incremental_gset << ','
     << r.work_combitec_iset << ',' << r.work_combitec_gset << ',' << r.error_estimate;
  return os.str();
}

}  // namespace sgc
