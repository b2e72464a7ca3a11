#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgc/field.hpp"
#include "sgc/multiindex.hpp"
#include "sgc/nodes.hpp"
#include "sgc/sparse_grid.hpp"

namespace sgc {

/// A parameter-to-value map. `evaluate` must be deterministic and safe to
/// call concurrently; it receives dense vectors of length `dims`.
struct CollocationModel {
  std::size_t dims = 1;   // declared number of random variables
  std::size_t width = 1;  // numbers per value
  std::function<void(std::span<const double> xi, std::span<double> out)> evaluate;
  /// Value-space norm; Euclidean if empty.
  std::function<double(std::span<const double>)> norm;

  double value_norm(std::span<const double> v) const;
};

/// Wraps a scalar function of xi.
CollocationModel scalar_model(std::size_t dims, std::function<double(std::span<const double>)> f);

/// Model evaluations keyed by point; every stored point costs one unit of
/// work, so nested families never pay twice.
class EvaluationCache {
 public:
  explicit EvaluationCache(const CollocationModel& model) : model_(&model) {}

  /// Evaluates (in parallel, stored in input order) the points not yet known.
  /// Returns the number of new evaluations.
  std::size_t ensure(const std::vector<std::vector<double>>& points);
  /// Values of a point, or nullptr.
  const double* find(const PointKey& key) const;
  std::size_t size() const { return index_.size(); }
  std::size_t width() const { return model_->width; }

  /// Values aligned with the grid's points; all must be present.
  GridValues values_for(const SparseGrid& grid) const;

 private:
  const CollocationModel* model_;
  std::unordered_map<PointKey, std::size_t, PointKeyHash> index_;
  std::vector<double> data_;
};

enum class ProfitKind { Error, ErrorPerWork };
ProfitKind parse_profit(std::string_view name);
std::string_view to_string(ProfitKind p);

struct AdaptiveOptions {
  NodeFamily family = NodeFamily::GaussianLeja;
  std::size_t budget = 2000;       // model evaluations
  std::size_t buffer_size = 5;
  std::size_t probe_samples = 200;
  std::uint64_t probe_seed = 0;
  ProfitKind profit = ProfitKind::Error;
  // Stop once every margin indicator is at most this value.
  double tolerance = 1e-12;
};

struct TraceRecord {
  std::size_t iteration = 0;
  MultiIndex selected;
  int max_component = 0;  // 1-based
  std::size_t active_dims = 0;
  std::size_t margin_size = 0;
  std::size_t work_incremental_iset = 0;
  std::size_t work_incremental_gset = 0;
  std::size_t work_combitec_iset = 0;
  std::size_t work_combitec_gset = 0;
  double error_estimate = 0.0;  // sum of margin indicators
};

struct MarginEntry {
  MultiIndex index;
  double indicator = 0.0;  // norm of the detail contribution
  double profit = 0.0;     // quantity used for selection
  std::size_t new_points = 0;
};

struct AdaptiveState {
  MultiIndexSet active;
  std::vector<MarginEntry> margin;       // graded-lex order
  std::vector<std::size_t> buffer;       // candidate dimensions not yet active
  std::vector<MultiIndex> saturated;     // forward neighbours beyond the node table
  std::vector<TraceRecord> trace;
  std::size_t work = 0;
};

/// Probe set: `samples` standard normal vectors of length `dims`.
std::vector<std::vector<double>> probe_set(std::size_t dims, std::size_t samples, std::uint64_t seed);

/// sqrt(mean over probes of ||(U_{I u {i}} - U_I) f||^2), with the detail
/// written as sum_e (-1)^|e| U_{i-e} f. All tensor points of i - e must be
/// in the cache.
double error_indicator(const CollocationModel& model, const EvaluationCache& cache, NodeFamily family,
                       const MultiIndex& i, const std::vector<std::vector<double>>& probes);

/// Dimension-adaptive construction with a buffer of candidate dimensions.
/// The trace starts with iteration 0 (the zero index and the initial
/// margin); `observer`, when set, runs after each trace record.
AdaptiveState run_a_posteriori(const CollocationModel& model, EvaluationCache& cache, const AdaptiveOptions& options,
                               const std::function<void(const AdaptiveState&)>& observer = {});

/// Distinct points of all tensor grids of the set (incremental) or of the
/// grids with nonzero combination coefficient (combitec).
std::size_t count_points(const MultiIndexSet& set, NodeFamily family, CountStrategy strategy);

/// r_m = min(1/2, g_m / 2), g_m = sup |phi_m|.
std::vector<double> a_priori_rates(const FieldExpansion& field);

/// N largest-profit indices, profit(k) = prod_m r_m^{k_m}, grown greedily so
/// the set stays monotone; dimensions are opened in expansion order.
MultiIndexSet a_priori_set(const FieldExpansion& field, std::size_t N);
MultiIndexSet a_priori_set(std::span<const double> rates, std::size_t N);

/// CSV header and rows for the trace.
std::string trace_csv_header();
std::string trace_csv_row(const TraceRecord& r);

}  // namespace sgc
