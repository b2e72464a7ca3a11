// sgc: command-line driver for the benchmarks and diagnostics. Every command
// writes CSV (header row, preceded by a "# config:" comment line).

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgc/bench.hpp"
#include "sgc/config.hpp"
#include "sgc/field.hpp"
#include "sgc/hermite.hpp"
#include "sgc/multiindex.hpp"
#include "sgc/nodes.hpp"
#include "sgc/pde.hpp"
#include "sgc/sparse_grid.hpp"

namespace {

// Output goes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) { return sgc::format_number(v); }

sgc::MultiIndexSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return sgc::read_index_set(in);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-grid collocation for lognormal diffusion problems"};
  app.require_subcommand(1);

  // ---- bench
  auto* bench = app.add_subcommand("bench", "Benchmarks driven by a config file");
  bench->require_subcommand(1);
  std::string config_path, output, trace_path, count;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    c->add_option("--seed", seed, "Master seed (overrides experiment.seed)");
    c->add_option("--output,-o", output, "Output CSV (default: stdout)");
  };
  auto* quad = bench->add_subcommand("quad", "Smolyak quadrature sweep");
  auto* interp = bench->add_subcommand("interp", "Smolyak interpolation sweep with MC L2 errors");
  auto* pde = bench->add_subcommand("pde", "Lognormal diffusion convergence study");
  auto* bnt = bench->add_subcommand("bnt", "Best-N-term curve of an adaptive run");
  for (auto* c : {quad, interp, pde, bnt}) add_common(c);
  for (auto* c : {quad, interp})
    c->add_option("--count", count, "Reported work metric")->check(CLI::IsMember({"incremental", "combitec"}));
  pde->add_option("--trace", trace_path, "Adaptive trace CSV (default: <output>.trace.csv, or skipped on stdout)");

  auto load_config = [&](CLI::App* c) {
    auto cfg = sgc::Config::load(config_path);
    if (c->count("--seed")) cfg.set("experiment.seed", std::to_string(seed));
    if (!count.empty()) cfg.set("experiment.count", count);
    return cfg;
  };

  // ---- field
  auto* field = app.add_subcommand("field", "Random field diagnostics");
  field->require_subcommand(1);
  auto* paths = field->add_subcommand("paths", "Sampled realizations of a(x)");
  std::string kind = "kl";
  double q = 1.0, sigma = 1.0;
  std::size_t M = 1000, samples = 30, grid_points = 257;
  paths->add_option("--kind", kind, "kl, lc or chalf")->check(CLI::IsMember({"kl", "lc", "chalf"}));
  paths->add_option("--q", q, "Smoothness exponent");
  paths->add_option("--sigma", sigma, "Amplitude");
  paths->add_option("--M", M, "Truncation");
  paths->add_option("--samples", samples, "Number of realizations");
  paths->add_option("--seed", seed, "Seed")->required();
  paths->add_option("--points", grid_points, "Uniform x-grid size")->check(CLI::Range(2, 1 << 20));
  paths->add_option("--output,-o", output, "Output CSV");

  auto* kappa = field->add_subcommand("kappa", "kappa_tau(x) on a log-spaced grid");
  double p = 3.0, xmin = 1e-6, xmax = 1e-3;
  std::size_t kappa_M = 10000000, kappa_points = 13;
  kappa->add_option("--p", p, "Exponent p")->required();
  kappa->add_option("--M", kappa_M, "Number of terms");
  kappa->add_option("--xmin", xmin, "Smallest x");
  kappa->add_option("--xmax", xmax, "Largest x");
  kappa->add_option("--points", kappa_points, "Number of x values")->check(CLI::Range(2, 100000));
  kappa->add_option("--output,-o", output, "Output CSV");

  // ---- nodes
  auto* nodes = app.add_subcommand("nodes", "Univariate rules");
  nodes->require_subcommand(1);
  auto* dump = nodes->add_subcommand("dump", "Nodes and quadrature weights of one level");
  std::string family = "leja";
  int level = 0;
  dump->add_option("--family", family, "gh, leja or gk")->required();
  dump->add_option("--level", level, "Level k (0-based)")->required()->check(CLI::NonNegativeNumber);
  dump->add_option("--output,-o", output, "Output CSV");

  // ---- profile
  auto* profile = app.add_subcommand("profile", "Operator diagnostics");
  profile->require_subcommand(1);
  auto* dnorms = profile->add_subcommand("delta-norms", "max_i ||Delta_i H_k|| for k = 0..kmax");
  int kmax = 39;
  dnorms->add_option("--family", family, "gh or leja")->required();
  dnorms->add_option("--kmax", kmax, "Largest degree")->check(CLI::NonNegativeNumber);
  dnorms->add_option("--output,-o", output, "Output CSV");

  // ---- set / grid
  auto* set_cmd = app.add_subcommand("set", "Index sets (one index per line, 1-based levels)");
  set_cmd->require_subcommand(1);
  auto* smolyak = set_cmd->add_subcommand("smolyak", "Total-degree set |i| <= w");
  std::size_t dims = 2;
  int w = 2;
  smolyak->add_option("--dims", dims, "Dimension")->required();
  smolyak->add_option("--w", w, "Level")->required()->check(CLI::NonNegativeNumber);
  smolyak->add_option("--output,-o", output, "Output file");
  auto* margin = set_cmd->add_subcommand("margin", "Reduced margin of a monotone set");
  std::string set_path;
  margin->add_option("--set", set_path, "Index set file")->required()->check(CLI::ExistingFile);
  margin->add_option("--output,-o", output, "Output file");

  auto* grid = app.add_subcommand("grid", "Sparse grids over an index set file");
  grid->require_subcommand(1);
  auto* gpoints = grid->add_subcommand("points", "Collocation points");
  auto* gterms = grid->add_subcommand("terms", "Combination-technique terms");
  auto* gcount = grid->add_subcommand("count", "Point count");
  for (auto* c : {gpoints, gterms, gcount}) {
    c->add_option("--set", set_path, "Index set file")->required()->check(CLI::ExistingFile);
    c->add_option("--family", family, "gh, leja or gk")->required();
    c->add_option("--output,-o", output, "Output CSV");
  }
  gcount->add_option("--count", count, "Counting strategy")->check(CLI::IsMember({"incremental", "combitec"}));

  // ---- pde
  auto* pde_cmd = app.add_subcommand("pde", "Single deterministic solves");
  pde_cmd->require_subcommand(1);
  auto* solve = pde_cmd->add_subcommand("solve", "Solve -(a u')' = f for one parameter vector");
  std::string xi_text;
  std::size_t mesh = 256;
  double rhs = 1.0;
  solve->add_option("--kind", kind, "kl, lc or chalf")->check(CLI::IsMember({"kl", "lc", "chalf"}));
  solve->add_option("--q", q, "Smoothness exponent");
  solve->add_option("--sigma", sigma, "Amplitude");
  solve->add_option("--M", M, "Truncation");
  solve->add_option("--xi", xi_text, "Comma-separated parameters (missing entries are 0)");
  solve->add_option("--mesh", mesh, "Number of elements")->check(CLI::Range(2, 1 << 24));
  solve->add_option("--rhs", rhs, "Constant forcing");
  solve->add_option("--output,-o", output, "Output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    sgc::Config echo;
    auto emit = [&](const sgc::Table& t) {
      Sink sink(output);
      sgc::write_csv(sink.os(), echo, t);
    };
    auto make_field = [&] {
      sgc::FieldExpansion f;
      f.kind = sgc::parse_expansion_kind(kind);
      f.q = q;
      f.sigma = sigma;
      f.truncation = M;
      echo.set("field.kind", kind);
      echo.set("field.q", num(q));
      echo.set("field.sigma", num(sigma));
      echo.set("field.truncation", std::to_string(M));
      return f;
    };

    if (*bench) {
      for (auto* c : {quad, interp, pde, bnt}) {
        if (!*c) continue;
        echo = load_config(c);
        if (c == quad) emit(sgc::run_quadrature_bench(echo));
        if (c == interp) emit(sgc::run_interpolation_bench(echo));
        if (c == bnt) emit(sgc::run_bnt(echo));
        if (c == pde) {
          const auto out = sgc::run_pde_bench(echo);
          emit(out.curves);
          const std::string tp = !trace_path.empty() ? trace_path : (output.empty() ? "" : output + ".trace.csv");
          if (!tp.empty()) {
            Sink sink(tp);
            sgc::write_csv(sink.os(), echo, out.trace);
          }
        }
      }
    } else if (*paths) {
      const auto f = make_field();
      echo.set("samples", std::to_string(samples));
      echo.set("experiment.seed", std::to_string(seed));
      std::vector<double> xs(grid_points);
      for (std::size_t i = 0; i < grid_points; ++i) xs[i] = static_cast<double>(i) / static_cast<double>(grid_points - 1);
      const auto a = sgc::sample_paths(f, xs, samples, seed);
      sgc::Table t;
      t.columns = {"sample", "x", "a"};
      for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({std::to_string(s), num(xs[i]), num(a[s][i])});
      emit(t);
    } else if (*kappa) {
      if (!(xmin > 0.0 && xmax > xmin && xmax <= 1.0)) throw std::invalid_argument("need 0 < xmin < xmax <= 1");
      echo.set("p", num(p));
      echo.set("M", std::to_string(kappa_M));
      std::vector<double> xs(kappa_points);
      for (std::size_t i = 0; i < kappa_points; ++i)
        xs[i] = std::exp(std::log(xmin) + (std::log(xmax) - std::log(xmin)) * i / (kappa_points - 1.0));
      const auto k = sgc::kappa_tau(p, kappa_M, xs);
      sgc::Table t;
      t.columns = {"x", "kappa"};
      for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({num(xs[i]), num(k[i])});
      emit(t);
    } else if (*dump) {
      const auto fam = sgc::parse_family(family);
      echo.set("family", std::string(sgc::to_string(fam)));
      echo.set("level", std::to_string(level));
      const auto r = sgc::rule(fam, level);
      sgc::Table t;
      t.columns = {"index", "node", "weight"};
      for (std::size_t j = 0; j < r->size(); ++j) t.rows.push_back({std::to_string(j), num(r->nodes[j]), num(r->weights[j])});
      emit(t);
    } else if (*dnorms) {
      const auto fam = sgc::parse_family(family);
      echo.set("family", std::string(sgc::to_string(fam)));
      echo.set("kmax", std::to_string(kmax));
      sgc::Table t;
      t.columns = {"k", "max_norm"};
      for (const auto& e : sgc::delta_norm_profile(fam, kmax)) t.rows.push_back({std::to_string(e.k), num(e.max_norm)});
      emit(t);
    } else if (*smolyak || *margin) {
      const auto s = *smolyak ? sgc::smolyak_set(dims, w) : sgc::reduced_margin(load_set(set_path));
      Sink sink(output);
      sgc::write_index_set(sink.os(), s);
    } else if (*grid) {
      const auto fam = sgc::parse_family(family);
      echo.set("family", std::string(sgc::to_string(fam)));
      echo.set("set", set_path);
      const auto set = load_set(set_path);
      const auto g = sgc::SparseGrid::build(set, fam);
      sgc::Table t;
      if (*gpoints) {
        for (std::size_t d = 0; d < g.dims(); ++d) t.columns.push_back("dim" + std::to_string(d + 1));
        for (std::size_t j = 0; j < g.num_points(); ++j) {
          std::vector<std::string> row;
          for (double x : g.point(j)) row.push_back(num(x));
          t.rows.push_back(std::move(row));
        }
      } else if (*gterms) {
        t.columns = {"index", "coefficient"};
        for (const auto& term : g.terms())
          t.rows.push_back({sgc::to_string(term.index, set.dimension_bound()), std::to_string(term.coefficient)});
      } else {
        const auto strategy = sgc::parse_count_strategy(count.empty() ? "incremental" : count);
        echo.set("count", std::string(sgc::to_string(strategy)));
        t.columns = {"indices", "terms", "points"};
        t.rows.push_back({std::to_string(set.size()), std::to_string(g.terms().size()), std::to_string(g.count(strategy))});
      }
      emit(t);
    } else if (*solve) {
      const auto f = make_field();
      echo.set("pde.mesh", std::to_string(mesh));
      echo.set("pde.rhs", num(rhs));
      echo.set("xi", xi_text);
      const sgc::LognormalSolver solver(f, mesh, rhs);
      const auto u = solver.solve(parse_doubles(xi_text));
      Sink sink(output);
      sink.os() << echo.echo() << '\n';
      sgc::write_solution_csv(sink.os(), u);
    }
  } catch (const std::exception& e) {
    std::cerr << "sgc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
