#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgc/adaptive.hpp"
#include "sgc/config.hpp"
#include "sgc/field.hpp"
#include "sgc/pde.hpp"

namespace sgc {

/// Scalar test function of `dims` standard normal variables with linear
/// coefficients c_m = coeff * m^{-decay} (divided by dims if normalized).
///   exp_linear:                exp(sum c_m xi_m)
///   inverse_quadratic_product: prod (1 + c_m xi_m^2)^{-1}
///   cos_linear:                cos(sum c_m xi_m)
///   hermite:                   prod H_{k_m}(xi_m), k given by `degrees`
struct ScalarFunction {
  std::string name;
  std::string type;
  std::size_t dims = 1;
  std::vector<double> c;
  std::vector<int> degrees;
  std::optional<double> integral;

  double operator()(std::span<const double> xi) const;
};

ScalarFunction make_scalar_function(const std::string& name, const std::string& type, std::size_t dims,
                                    double coeff = 1.0, double decay = 0.0, bool normalize = false,
                                    std::vector<int> degrees = {});

/// Functions listed in "suite.functions", each configured by a
/// [function.NAME] section; dimension from "grid.dims".
std::vector<ScalarFunction> function_suite(const Config& cfg);

struct McError {
  std::vector<double> batch_mse;  // Err_k, mean of squares per batch
  double median_mse = 0.0;
  double error = 0.0;  // sqrt(median_mse)
};

/// K batches of P standard normal samples (batch k uses substream(seed, k)).
McError mc_l2_error(const std::function<double(std::span<const double>)>& approx,
                    const std::function<double(std::span<const double>)>& f, std::size_t dims, std::size_t K,
                    std::size_t P, std::uint64_t seed);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Comment line echoing the config, header row, then the rows.
void write_csv(std::ostream& os, const Config& cfg, const Table& table);
/// Shortest round-trip decimal form.
std::string format_number(double v);

Table run_quadrature_bench(const Config& cfg);
Table run_interpolation_bench(const Config& cfg);

/// Parameter vectors at the reference truncation with the model's values.
struct ReferenceSet {
  std::vector<std::vector<double>> xi;
  std::vector<double> values;  // width numbers per sample
  std::size_t width = 1;
  std::size_t resampled = 0;  // draws replaced after a CoefficientError
};

ReferenceSet make_reference(const CollocationModel& model, std::size_t samples, std::uint64_t seed);

/// sqrt(mean_i ||f(xi_i) - U_set f(xi_i)||^2) with the model's norm.
double reference_error(const MultiIndexSet& set, NodeFamily family, const EvaluationCache& cache,
                       const CollocationModel& model, const ReferenceSet& ref);

/// Lognormal diffusion problem -(a u')' = rhs as a collocation model with
/// the H1_0 seminorm. The solver must outlive the model.
CollocationModel pde_model(const LognormalSolver& solver);

struct CurvePoint {
  std::size_t work_incremental_iset = 0;
  std::size_t work_incremental_gset = 0;
  std::size_t work_combitec_iset = 0;
  std::size_t work_combitec_gset = 0;
  std::size_t indices = 0;
  double error = 0.0;
};

struct StudyRun {
  std::string strategy;  // "a_priori" or "a_posteriori"
  std::vector<CurvePoint> points;
  std::vector<TraceRecord> trace;
  MultiIndexSet final_set;
  bool exhausted = false;         // Genz-Keister table ran out
  std::size_t max_term_dims = 0;  // largest support among nonzero-coefficient terms
};

/// Adaptive run with the error measured whenever the I-set incremental work
/// passes the next of `per_decade` log-spaced checkpoints (and at the end).
StudyRun a_posteriori_study(const CollocationModel& model, EvaluationCache& cache, const ReferenceSet& ref,
                            const AdaptiveOptions& options, std::size_t per_decade = 8);

/// a_priori_set(rates, N) for N growing geometrically until the incremental
/// point count exceeds `budget`.
StudyRun a_priori_study(const CollocationModel& model, EvaluationCache& cache, const ReferenceSet& ref,
                        std::span<const double> rates, NodeFamily family, std::size_t budget, double growth = 1.25);

struct ErrorCurve {
  std::string label;
  std::vector<std::pair<std::size_t, double>> points;  // work strictly increasing
};

/// The run's curves under every applicable counting label.
std::vector<ErrorCurve> error_curves(const StudyRun& run);

struct PdeSettings {
  FieldExpansion field;
  std::size_t mesh_n = 256;
  double rhs = 1.0;
  std::vector<std::string> strategies{"a_posteriori"};
  AdaptiveOptions adaptive;
  std::size_t n_ref = 1000;
  std::size_t ref_truncation = 1000;
  std::uint64_t seed = 0;
  std::size_t per_decade = 8;
  double a_priori_growth = 1.25;
};

PdeSettings pde_settings(const Config& cfg);

struct PdeStudy {
  std::vector<StudyRun> runs;
  std::size_t resampled = 0;
};

PdeStudy run_pde_study(const PdeSettings& settings);

struct PdeBenchOutput {
  Table curves;
  Table trace;
};

PdeBenchOutput run_pde_bench(const Config& cfg);

/// Best-N-term curve of the final grid's Hermite expansion next to the
/// run's error versus index count.
Table run_bnt(const Config& cfg);

}  // namespace sgc
