#include "sgc/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sgc/hermite.hpp"
#include "sgc/sparse_grid.hpp"

namespace sgc {

namespace {

// Reference parameter draws use streams above 2^32 so they never coincide
// with probe or batch streams of the same seed.
constexpr std::uint64_t kReferenceStream = std::uint64_t{1} << 32;
constexpr std::uint64_t kResampleStride = std::uint64_t{1} << 40;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// E[(1 + a xi^2)^{-1}] for xi ~ N(0,1).
double inverse_quadratic_moment(double a) {
  if (a == 0.0) return 1.0;
  const double t = 1.0 / (2.0 * a);
  if (t < 600.0) return std::sqrt(std::numbers::pi * t) * std::exp(t) * std::erfc(std::sqrt(t));
  const auto gh = rule(NodeFamily::GaussHermite, 199);
  double s = 0.0;
  for (std::size_t j = 0; j < gh->size(); ++j) s += gh->weights[j] / (1.0 + a * gh->nodes[j] * gh->nodes[j]);
  return s;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

// Numerical reference integral: 200-point Gauss-Hermite in 1D, otherwise a
// Gauss-Hermite Smolyak rule at level `w`.
double numeric_integral(const ScalarFunction& f, int w) {
  if (f.dims == 1) {
    const auto gh = rule(NodeFamily::GaussHermite, 199);
    double s = 0.0;
    for (std::size_t j = 0; j < gh->size(); ++j) s += gh->weights[j] * f(std::span<const double>(&gh->nodes[j], 1));
    return s;
  }
  const auto grid = SparseGrid::build(smolyak_set(f.dims, w), NodeFamily::GaussHermite);
  return grid.quadrature(sample(grid, [&](std::span<const double> x) { return f(x); }));
}

struct SweepSettings {
  std::vector<ScalarFunction> functions;
  std::vector<NodeFamily> families;
  CountStrategy count = CountStrategy::Incremental;
  int max_w = 8;
  std::size_t max_points = 20000;
};

SweepSettings sweep_settings(const Config& cfg) {
  SweepSettings s;
  s.functions = function_suite(cfg);
  for (const auto& name : cfg.get_list("experiment.families", {"gh", "leja", "gk"})) s.families.push_back(parse_family(name));
  s.count = parse_count_strategy(cfg.get("experiment.count", "incremental"));
  s.max_w = static_cast<int>(cfg.get_size("grid.max_w", 8));
  s.max_points = cfg.get_size("grid.max_points", 20000);
  return s;
}

}  // namespace

double ScalarFunction::operator()(std::span<const double> xi) const {
  if (xi.size() < dims) throw std::invalid_argument("function " + name + ": parameter vector too short");
  if (type == "exp_linear" || type == "cos_linear") {
    double s = 0.0;
    for (std::size_t m = 0; m < dims; ++m) s += c[m] * xi[m];
    return type == "exp_linear" ? std::exp(s) : std::cos(s);
  }
  if (type == "inverse_quadratic_product") {
    double p = 1.0;
    for (std::size_t m = 0; m < dims; ++m) p /= 1.0 + c[m] * xi[m] * xi[m];
    return p;
  }
  if (type == "hermite") {
    double p = 1.0;
    for (std::size_t m = 0; m < dims; ++m) p *= hermite_eval(degrees[m], xi[m]);
    return p;
  }
  throw std::logic_error("unknown function type " + type);
}

ScalarFunction make_scalar_function(const std::string& name, const std::string& type, std::size_t dims, double coeff,
                                    double decay, bool normalize, std::vector<int> degrees) {
  if (dims == 0) throw std::invalid_argument("function " + name + ": dims must be positive");
  ScalarFunction f;
  f.name = name;
  f.type = type;
  f.dims = dims;
  for (std::size_t m = 1; m <= dims; ++m) {
    double cm = coeff * std::pow(static_cast<double>(m), -decay);
    if (normalize) cm /= static_cast<double>(dims);
    f.c.push_back(cm);
  }
  double sq = 0.0;
  for (double cm : f.c) sq += cm * cm;
  if (type == "exp_linear") {
    f.integral = std::exp(0.5 * sq);
  } else if (type == "cos_linear") {
    f.integral = std::exp(-0.5 * sq);
  } else if (type == "inverse_quadratic_product") {
    double p = 1.0;
    for (double cm : f.c) {
      if (cm < 0.0) throw std::invalid_argument("function " + name + ": coefficients must be non-negative");
      p *= inverse_quadratic_moment(cm);
    }
    f.integral = p;
  } else if (type == "hermite") {
    degrees.resize(dims, 0);
    f.degrees = std::move(degrees);
    f.integral = std::all_of(f.degrees.begin(), f.degrees.end(), [](int k) { return k == 0; }) ? 1.0 : 0.0;
  } else {
    throw std::invalid_argument("function " + name + ": unknown type '" + type + "'");
  }
  return f;
}

std::vector<ScalarFunction> function_suite(const Config& cfg) {
  const auto names = cfg.get_list("suite.functions", {});
  if (names.empty()) throw std::invalid_argument("config: suite.functions lists no functions");
  const std::size_t dims = cfg.get_size("grid.dims", 1);
  std::vector<ScalarFunction> out;
  for (const auto& name : names) {
    const std::string sec = "function." + name + ".";
    std::vector<int> degrees;
    for (const auto& d : cfg.get_list(sec + "degrees", {})) degrees.push_back(std::stoi(d));
    out.push_back(make_scalar_function(name, cfg.get(sec + "type"), cfg.get_size(sec + "dims", dims),
                                       cfg.get_double(sec + "coeff", 1.0), cfg.get_double(sec + "decay", 0.0),
                                       cfg.get_bool(sec + "normalize", false), degrees));
  }
  return out;
}

McError mc_l2_error(const std::function<double(std::span<const double>)>& approx,
                    const std::function<double(std::span<const double>)>& f, std::size_t dims, std::size_t K,
                    std::size_t P, std::uint64_t seed) {
  if (K == 0 || P == 0) throw std::invalid_argument("mc_l2_error: K and P must be positive");
  McError out;
  std::vector<double> sq(P);
  for (std::size_t k = 0; k < K; ++k) {
    auto rng = substream(seed, k);
    const auto xs = gaussian_vector(rng, P * dims);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(P); ++i) {
      const std::span<const double> xi(xs.data() + static_cast<std::size_t>(i) * dims, dims);
      const double d = f(xi) - approx(xi);
      sq[static_cast<std::size_t>(i)] = d * d;
    }
    double s = 0.0;
    for (double v : sq) s += v;
    out.batch_mse.push_back(s / static_cast<double>(P));
  }
  out.median_mse = median(out.batch_mse);
  out.error = std::sqrt(out.median_mse);
  return out;
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Config& cfg, const Table& table) {
  os << cfg.echo() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << '\n';
  }
}

Table run_quadrature_bench(const Config& cfg) {
  const auto s = sweep_settings(cfg);
  Table t;
  t.columns = {"function", "family", "dims", "w", "points_incremental", "points_combitec", "work",
               "value", "reference", "error", "status"};
  for (const auto& f : s.functions) {
    const double ref = f.integral ? *f.integral : numeric_integral(f, s.max_w + 4);
    for (const auto family : s.families) {
      for (int w = 0; w <= s.max_w; ++w) {
        std::vector<std::string> row{f.name, std::string(to_string(family)), std::to_string(f.dims), std::to_string(w)};
        SparseGrid grid;
        try {
          grid = SparseGrid::build(smolyak_set(f.dims, w), family);
        } catch (const RuleExhausted&) {
          row.insert(row.end(), {"", "", "", "", format_number(ref), "", "exhausted"});
          t.rows.push_back(std::move(row));
          break;
        }
        row.push_back(std::to_string(grid.incremental_count()));
        row.push_back(std::to_string(grid.combitec_count()));
        row.push_back(std::to_string(grid.count(s.count)));
        if (grid.incremental_count() > s.max_points) {
          row.insert(row.end(), {"", format_number(ref), "", "point_cap"});
          t.rows.push_back(std::move(row));
          break;
        }
        const double q = grid.quadrature(sample(grid, [&](std::span<const double> x) { return f(x); }));
        row.insert(row.end(), {format_number(q), format_number(ref), format_number(std::abs(q - ref)), "ok"});
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

Table run_interpolation_bench(const Config& cfg) {
  const auto s = sweep_settings(cfg);
  const std::uint64_t seed = cfg.get_seed();
  Table t;
  t.columns = {"function", "family", "dims", "w", "points_incremental", "points_combitec", "work",
               "median_mse", "error", "batch_mse", "status"};
  for (const auto& f : s.functions) {
    const std::size_t K = cfg.get_size("mc.batches", f.dims == 1 ? 30 : 50);
    const std::size_t P = cfg.get_size("mc.samples", f.dims == 1 ? 100 : 500);
    for (const auto family : s.families) {
      for (int w = 0; w <= s.max_w; ++w) {
        std::vector<std::string> row{f.name, std::string(to_string(family)), std::to_string(f.dims), std::to_string(w)};
        SparseGrid grid;
        try {
          grid = SparseGrid::build(smolyak_set(f.dims, w), family);
        } catch (const RuleExhausted&) {
          row.insert(row.end(), {"", "", "", "", "", "", "exhausted"});
          t.rows.push_back(std::move(row));
          break;
        }
        row.push_back(std::to_string(grid.incremental_count()));
        row.push_back(std::to_string(grid.combitec_count()));
        row.push_back(std::to_string(grid.count(s.count)));
        if (grid.incremental_count() > s.max_points) {
          row.insert(row.end(), {"", "", "", "point_cap"});
          t.rows.push_back(std::move(row));
          break;
        }
        const auto vals = sample(grid, [&](std::span<const double> x) { return f(x); });
        const auto e = mc_l2_error([&](std::span<const double> x) { return grid.evaluate(vals, x); },
                                   [&](std::span<const double> x) { return f(x); }, f.dims, K, P, seed);
        row.insert(row.end(), {format_number(e.median_mse), format_number(e.error), join(e.batch_mse, ';'), "ok"});
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

ReferenceSet make_reference(const CollocationModel& model, std::size_t samples, std::uint64_t seed) {
  ReferenceSet ref;
  ref.width = model.width;
  ref.xi.resize(samples);
  ref.values.resize(samples * model.width);
  std::vector<std::size_t> retries(samples, 0);
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(samples); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t attempt = 0;; ++attempt) {
      auto rng = substream(seed, kReferenceStream + i + attempt * kResampleStride);
      ref.xi[i] = gaussian_vector(rng, model.dims);
      try {
        model.evaluate(ref.xi[i], std::span<double>(ref.values.data() + i * model.width, model.width));
        break;
      } catch (const CoefficientError& e) {
        ++retries[i];
        if (attempt >= 10) {
#pragma omp critical(sgc_reference_failure)
          failure = e.what();
          break;
        }
      }
    }
  }
  if (!failure.empty()) throw std::runtime_error("reference sampling kept failing: " + failure);
  for (auto r : retries) ref.resampled += r;
  return ref;
}

double reference_error(const MultiIndexSet& set, NodeFamily family, const EvaluationCache& cache,
                       const CollocationModel& model, const ReferenceSet& ref) {
  const auto grid = SparseGrid::build(MultiIndexSet(set.indices(), 0), family);
  const auto vals = cache.values_for(grid);
  const std::size_t w = ref.width;
  const std::size_t n = ref.xi.size();
  std::vector<double> sq(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<double> approx(w);
    grid.evaluate(vals, ref.xi[i], approx);
    for (std::size_t k = 0; k < w; ++k) approx[k] = ref.values[i * w + k] - approx[k];
    const double d = model.value_norm(approx);
    sq[i] = d * d;
  }
  double s = 0.0;
  for (double v : sq) s += v;
  return n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
}

CollocationModel pde_model(const LognormalSolver& solver) {
  CollocationModel m;
  m.dims = solver.field().truncation;
  m.width = solver.mesh_n() - 1;
  m.evaluate = [&solver](std::span<const double> xi, std::span<double> out) {
    const auto u = solver.solve(xi);
    std::copy(u.nodal.begin(), u.nodal.end(), out.begin());
  };
  m.norm = [](std::span<const double> v) { return h1_seminorm(v); };
  return m;
}

namespace {

std::size_t max_term_dims(const MultiIndexSet& set) {
  std::size_t d = 0;
  for (const auto& [k, c] : combination_coefficients(set))
    if (c != 0) d = std::max(d, k.support_size());
  return d;
}

}  // namespace

StudyRun a_posteriori_study(const CollocationModel& model, EvaluationCache& cache, const ReferenceSet& ref,
                            const AdaptiveOptions& options, std::size_t per_decade) {
  StudyRun run;
  run.strategy = "a_posteriori";
  const double factor = std::pow(10.0, 1.0 / static_cast<double>(std::max<std::size_t>(per_decade, 1)));
  std::size_t next = 1;
  std::size_t recorded_iteration = static_cast<std::size_t>(-1);
  auto record = [&](const AdaptiveState& st) {
    const auto& r = st.trace.back();
    CurvePoint p;
    p.work_incremental_iset = r.work_incremental_iset;
    p.work_incremental_gset = r.work_incremental_gset;
    p.work_combitec_iset = r.work_combitec_iset;
    p.work_combitec_gset = r.work_combitec_gset;
    p.indices = st.active.size();
    p.error = reference_error(st.active, options.family, cache, model, ref);
    run.points.push_back(p);
    recorded_iteration = r.iteration;
    while (static_cast<double>(next) <= static_cast<double>(r.work_incremental_iset))
      next = std::max(next + 1, static_cast<std::size_t>(std::ceil(static_cast<double>(next) * factor)));
  };
  const auto st = run_a_posteriori(model, cache, options, [&](const AdaptiveState& s) {
    if (s.trace.back().work_incremental_iset >= next) record(s);
  });
  if (st.trace.back().iteration != recorded_iteration) record(st);
  run.trace = st.trace;
  run.final_set = st.active;
  run.exhausted = !st.saturated.empty();
  run.max_term_dims = max_term_dims(st.active);
  return run;
}

StudyRun a_priori_study(const CollocationModel& model, EvaluationCache& cache, const ReferenceSet& ref,
                        std::span<const double> rates, NodeFamily family, std::size_t budget, double growth) {
  StudyRun run;
  run.strategy = "a_priori";
  std::size_t N = 1, previous = 0;
  while (true) {
    const auto set = a_priori_set(rates, N);
    if (set.size() == previous) break;
    std::size_t incremental = 0, combitec = 0;
    try {
      incremental = count_points(set, family, CountStrategy::Incremental);
      combitec = count_points(set, family, CountStrategy::Combitec);
    } catch (const RuleExhausted&) {
      run.exhausted = true;
      break;
    }
    if (incremental > budget && !run.points.empty()) break;
    for (const auto& k : set) cache.ensure(tensor_points(k, family, model.dims));
    CurvePoint p;
    p.work_incremental_iset = p.work_incremental_gset = incremental;
    p.work_combitec_iset = p.work_combitec_gset = combitec;
    p.indices = set.size();
    p.error = reference_error(set, family, cache, model, ref);
    run.points.push_back(p);
    run.final_set = set;
    previous = set.size();
    N = std::max(N + 1, static_cast<std::size_t>(std::ceil(static_cast<double>(N) * growth)));
  }
  run.max_term_dims = run.final_set.empty() ? 0 : max_term_dims(run.final_set);
  return run;
}

std::vector<ErrorCurve> error_curves(const StudyRun& run) {
  auto make = [&](const std::string& label, std::size_t CurvePoint::*work) {
    ErrorCurve c;
    c.label = label;
    for (const auto& p : run.points) {
      const std::size_t w = p.*work;
      if (!c.points.empty() && w <= c.points.back().first) continue;
      c.points.emplace_back(w, p.error);
    }
    return c;
  };
  if (run.strategy == "a_priori")
    return {make("a_priori/incremental", &CurvePoint::work_incremental_iset),
            make("a_priori/combitec", &CurvePoint::work_combitec_iset)};
  return {make("a_posteriori_Iset/incremental", &CurvePoint::work_incremental_iset),
          make("a_posteriori_Gset/incremental", &CurvePoint::work_incremental_gset),
          make("a_posteriori_Iset/combitec", &CurvePoint::work_combitec_iset),
          make("a_posteriori_Gset/combitec", &CurvePoint::work_combitec_gset)};
}

PdeSettings pde_settings(const Config& cfg) {
  PdeSettings s;
  s.field.kind = parse_expansion_kind(cfg.get("field.kind", "kl"));
  s.field.q = cfg.get_double("field.q", 1.0);
  s.field.sigma = cfg.get_double("field.sigma", 1.0);
  s.field.truncation = cfg.get_size("field.truncation", 1000);
  s.field.lc_scale = cfg.get_double("field.lc_scale", s.field.lc_scale);
  s.field.chalf_series = cfg.get_size("field.chalf_series", s.field.chalf_series);
  s.mesh_n = cfg.get_size("pde.mesh", 256);
  s.rhs = cfg.get_double("pde.rhs", 1.0);
  s.strategies = cfg.get_list("pde.strategies", {"a_posteriori"});
  for (const auto& st : s.strategies)
    if (st != "a_priori" && st != "a_posteriori") throw std::invalid_argument("config: unknown strategy '" + st + "'");
  s.seed = cfg.get_seed();
  s.adaptive.family = parse_family(cfg.get("experiment.family", "leja"));
  s.adaptive.budget = cfg.get_size("pde.budget", 2000);
  s.adaptive.buffer_size = cfg.get_size("pde.buffer", 5);
  s.adaptive.probe_samples = cfg.get_size("pde.probes", 200);
  s.adaptive.probe_seed = s.seed;
  s.adaptive.profit = parse_profit(cfg.get("pde.profit", "error"));
  s.n_ref = cfg.get_size("pde.n_ref", 1000);
  s.ref_truncation = cfg.get_size("pde.ref_truncation", 1000);
  s.per_decade = cfg.get_size("pde.checkpoints_per_decade", 8);
  s.a_priori_growth = cfg.get_double("pde.a_priori_growth", 1.25);
  return s;
}

PdeStudy run_pde_study(const PdeSettings& settings) {
  const LognormalSolver solver(settings.field, settings.mesh_n, settings.rhs);
  const auto model = pde_model(solver);
  PdeStudy study;
  ReferenceSet ref;
  if (settings.ref_truncation == settings.field.truncation) {
    ref = make_reference(model, settings.n_ref, settings.seed);
  } else {
    FieldExpansion rf = settings.field;
    rf.truncation = settings.ref_truncation;
    const LognormalSolver ref_solver(rf, settings.mesh_n, settings.rhs);
    ref = make_reference(pde_model(ref_solver), settings.n_ref, settings.seed);
  }
  study.resampled = ref.resampled;
  for (const auto& strategy : settings.strategies) {
    EvaluationCache cache(model);
    if (strategy == "a_priori") {
      const auto rates = a_priori_rates(settings.field);
      study.runs.push_back(a_priori_study(model, cache, ref, rates, settings.adaptive.family, settings.adaptive.budget,
                                          settings.a_priori_growth));
    } else {
      study.runs.push_back(a_posteriori_study(model, cache, ref, settings.adaptive, settings.per_decade));
    }
  }
  return study;
}

PdeBenchOutput run_pde_bench(const Config& cfg) {
  const auto s = pde_settings(cfg);
  const auto study = run_pde_study(s);
  PdeBenchOutput out;
  out.curves.columns = {"label", "family", "expansion", "q", "sigma", "buffer", "work", "error", "exhausted"};
  for (const auto& run : study.runs) {
    for (const auto& c : error_curves(run)) {
      for (const auto& [w, e] : c.points) {
        out.curves.rows.push_back({c.label, std::string(to_string(s.adaptive.family)),
                                   std::string(to_string(s.field.kind)), format_number(s.field.q),
                                   format_number(s.field.sigma), std::to_string(s.adaptive.buffer_size),
                                   std::to_string(w), format_number(e), run.exhausted ? "1" : "0"});
      }
    }
    if (run.strategy == "a_posteriori") {
      out.trace.columns = split_csv(trace_csv_header());
      for (const auto& r : run.trace) out.trace.rows.push_back(split_csv(trace_csv_row(r)));
    }
  }
  return out;
}

Table run_bnt(const Config& cfg) {
  const std::string source = cfg.get("bnt.source", "pde");
  const std::uint64_t seed = cfg.get_seed();
  Table t;
  t.columns = {"series", "N", "error"};

  auto emit = [&](const CollocationModel& model, const ReferenceSet& ref, const AdaptiveOptions& opt,
                  std::size_t per_decade) {
    EvaluationCache cache(model);
    const auto run = a_posteriori_study(model, cache, ref, opt, per_decade);
    const auto grid = SparseGrid::build(MultiIndexSet(run.final_set.indices(), 0), opt.family);
    const auto vals = cache.values_for(grid);
    const auto expansion = model.width == 1 ? to_hermite(grid, vals) : to_hermite(grid, vals, model.norm);
    for (const auto& [n, e] : best_n_term_curve(expansion))
      t.rows.push_back({"bnt", std::to_string(n), format_number(e)});
    for (const auto& p : run.points) t.rows.push_back({"sparse_grid", std::to_string(p.indices), format_number(p.error)});
  };

  if (source == "pde") {
    const auto s = pde_settings(cfg);
    const LognormalSolver solver(s.field, s.mesh_n, s.rhs);
    const auto model = pde_model(solver);
    const auto ref = make_reference(model, s.n_ref, s.seed);
    emit(model, ref, s.adaptive, s.per_decade);
    return t;
  }
  const auto suite = function_suite(cfg);
  auto it = std::find_if(suite.begin(), suite.end(), [&](const ScalarFunction& f) { return f.name == source; });
  if (it == suite.end()) throw std::invalid_argument("config: bnt.source '" + source + "' is neither pde nor a suite function");
  const ScalarFunction f = *it;
  const auto model = scalar_model(f.dims, [f](std::span<const double> x) { return f(x); });
  const auto ref = make_reference(model, cfg.get_size("pde.n_ref", 1000), seed);
  AdaptiveOptions opt;
  opt.family = parse_family(cfg.get("experiment.family", "leja"));
  opt.budget = cfg.get_size("pde.budget", 2000);
  opt.buffer_size = cfg.get_size("pde.buffer", 5);
  opt.probe_samples = cfg.get_size("pde.probes", 200);
  opt.probe_seed = seed;
  opt.profit = parse_profit(cfg.get("pde.profit", "error"));
  emit(model, ref, opt, cfg.get_size("pde.checkpoints_per_decade", 8));
  return t;
}

}  // namespace sgc
