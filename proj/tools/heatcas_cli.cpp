// Command-line front end: computes heat coefficients, runs the randomized
// property suites, evaluates term documents on sampled backgrounds, exposes
// the circle heat-trace oracle and compares documents.
//
// Exit codes: 0 success, 1 failed check / anomaly, 2 usage error.

#include "heatcas/gauge.hpp"
#include "heatcas/json_io.hpp"
#include "heatcas/latex.hpp"
#include "heatcas/numeric_eval.hpp"
#include "heatcas/pipeline.hpp"
#include "heatcas/reduction.hpp"
#include "heatcas/spectral.hpp"
#include "heatcas/tensor_ops.hpp"
#include "heatcas/torus.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using heatcas::Expression;
using nlohmann::json;

constexpr const char* kEngineVersion = "heatcas 1.0.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string assumptions_str(const heatcas::Assumptions& a) {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += ",";
    s += name;
  };
  add(a.n_zero, "n_zero");
  add(a.u_parallel, "u_parallel");
  add(a.u_identity, "u_identity");
  add(a.flat, "flat");
  return s;
}

// --- check suites ----------------------------------------------------------

struct Record {
  std::string identity;
  long seed;
  double max_abs_err;
  bool pass;
};

json to_json(const Record& r) {
  return json{{"identity", r.identity},
              {"seed", r.seed},
              {"max_abs_err", r.max_abs_err},
              {"pass", r.pass}};
}

double max_entry(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

int report(const std::vector<Record>& recs) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : recs) {
    arr.push_back(to_json(r));
    all = all && r.pass;
  }
  std::cout << arr.dump(2) << "\n";
  return all ? 0 : 1;
}

std::vector<Record> check_reduction(long seed, int trials) {
  using namespace heatcas;
  const Expression r2 = merged(compute_R(2));
  const Expression releveled = reduce_level(level_up(r2));
  double err = 0;
  for (int i = 0; i < trials; ++i) {
    const int dim = 2 + i % 3;
    const auto bg = free_background(static_cast<std::uint64_t>(seed) + i, 2 + i % 2, dim);
    err = std::max(err, max_entry(evaluate(r2, bg) - evaluate(releveled, bg)));
  }
  const bool idem = difference(releveled, reduce_level(releveled)).empty();
  return {{"reduce_level value preservation on R_2", seed, err, err < 1e-9},
          {"reduce_level idempotence", seed, 0.0, idem}};
}

std::vector<Record> check_geometry(long seed, int trials) {
  using namespace heatcas;
  double err = 0;
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::uniform_real_distribution<double> unit(-0.3, 0.3);
  for (int trial = 0; trial < trials; ++trial)
    for (int d = 1; d <= 4; ++d) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
          const double v = (i == j ? 1.0 : 0.0) + unit(rng);
          g(i, j) = g(j, i) = v;
        }
      for (int p = 0; p <= 3; ++p) {
        const auto oracle = gaussian_moment_oracle(d, p, g);
        // symbolic pairing expansion of the same moment tensor
        std::vector<Index> idx;
        for (int i = 0; i < 2 * p; ++i) idx.push_back(dn(i));
        const Expression pairs = build_moment_tensor(idx);
        std::vector<int> comp(2 * p, 0);
        for (std::size_t flat = 0; flat < oracle.size(); ++flat) {
          std::size_t rest = flat;
          for (int i = 2 * p - 1; i >= 0; --i) {
            comp[i] = static_cast<int>(rest % d);
            rest /= d;
          }
          double sym = 0;
          for (const auto& t : pairs) {
            double prod = t.coeff.eval(double(d));
            for (const auto& s : t.scalars)
              prod *= g(comp[s.idx[0].id], comp[s.idx[1].id]);
            sym += prod;
          }
          err = std::max(err, std::abs(sym - oracle[flat]));
        }
      }
    }
  return {{"moment tensor pairings vs Gauss-Hermite oracle", seed, err, err < 1e-10}};
}

std::vector<Record> check_pipeline(long seed, int trials) {
  using namespace heatcas;
  std::vector<Record> out;
  {
    const Expression r0 = merged(compute_R(0));
    Term expect;
    expect.x = XDescriptor{0, 0};
    const bool ok = difference(r0, Expression{expect}).empty();
    out.push_back({"R_0 closed form", seed, 0.0, ok});
  }
  {
    const HeatResult h2 = compute_R(2);
    const Expression r2 = merged(h2);
    double err = 0;
    for (int i = 0; i < trials; ++i) {
      const int dim = 2 + i % 3;
      const auto bg = free_background(static_cast<std::uint64_t>(seed) + i, 2 + i % 2, dim);
      const Eigen::MatrixXd direct = evaluate(r2, bg);
      const Eigen::MatrixXd lev = evaluate(level_up(r2), bg);
      err = std::max(err, max_entry(direct - lev));
    }
    out.push_back({"R_2 leveling self-consistency", seed, err, err < 1e-9});
  }
  return out;
}

int run_check(const std::string& suite, long seed, int trials) {
  std::vector<Record> recs;
  int rc = 0;
  if (suite == "spectral" || suite == "all") {
    const auto s = heatcas::run_spectral_property_suite(
        static_cast<std::uint64_t>(seed), trials);
    std::cout << s.json << "\n";
    if (!s.all_pass) rc = 1;
  }
  if (suite == "reduction" || suite == "all") {
    auto r = check_reduction(seed, trials);
    recs.insert(recs.end(), r.begin(), r.end());
  }
  if (suite == "geometry" || suite == "all") {
    auto r = check_geometry(seed, std::max(1, trials / 50));
    recs.insert(recs.end(), r.begin(), r.end());
  }
  if (suite == "pipeline" || suite == "all") {
    auto r = check_pipeline(seed, std::min(trials, 12));
    recs.insert(recs.end(), r.begin(), r.end());
  }
  if (!recs.empty() && report(recs) != 0) rc = 1;
  return rc;
}

// --- torus oracle samples --------------------------------------------------

heatcas::MatrixFn series_fn(const json& terms, int n) {
  struct Piece {
    int kind; // 0 const, 1 cos, 2 sin
    int k;
    Eigen::MatrixXd m;
  };
  auto pieces = std::make_shared<std::vector<Piece>>();
  for (const auto& t : terms) {
    Piece p;
    const std::string fn = t.value("fn", "const");
    p.kind = fn == "cos" ? 1 : fn == "sin" ? 2 : 0;
    p.k = t.value("k", 0);
    p.m = Eigen::MatrixXd::Zero(n, n);
    const auto& rows = t.at("m");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p.m(i, j) = rows.at(i).at(j).get<double>();
    pieces->push_back(std::move(p));
  }
  return [pieces, n](double x) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (const auto& p : *pieces) {
      const double w = p.kind == 1 ? std::cos(p.k * x) : p.kind == 2 ? std::sin(p.k * x) : 1.0;
      out += w * p.m;
    }
    return out;
  };
}

int run_oracle(const std::string& samples_path, int grid, double tmin, double tmax) {
  const json doc = json::parse(read_file(samples_path));
  json results = json::array();
  for (const auto& s : doc.at("samples")) {
    const int n = s.at("size").get<int>();
    const auto u = series_fn(s.at("u"), n);
    const auto p = series_fn(s.at("p"), n);
    const auto q = series_fn(s.at("q"), n);
    const auto fit = heatcas::heat_trace_oracle_torus1d(u, p, q, grid, tmin, tmax);
    results.push_back(json{{"a0", fit.a0},
                           {"a2", fit.a2},
                           {"a0_err", fit.a0_err},
                           {"a2_err", fit.a2_err}});
  }
  std::cout << results.dump(2) << "\n";
  return 0;
}

// --- eval / diff -----------------------------------------------------------

int run_eval(const std::string& expr_path, const std::string& samples_path) {
  const Expression e = heatcas::parse_document(read_file(expr_path));
  const json doc = json::parse(read_file(samples_path));
  json results = json::array();
  for (const auto& s : doc.at("samples")) {
    const auto seed = s.value("seed", 0L);
    const int n = s.value("n", 2);
    const int dim = s.value("dim", 3);
    auto bg = heatcas::free_background(static_cast<std::uint64_t>(seed), n, dim);
    if (s.contains("dval")) bg.dval = s.at("dval").get<double>();
    const Eigen::MatrixXd v = heatcas::evaluate(e, bg);
    json rows = json::array();
    for (int i = 0; i < v.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < v.cols(); ++j) row.push_back(v(i, j));
      rows.push_back(std::move(row));
    }
    results.push_back(json{{"seed", seed}, {"n", n}, {"dim", dim}, {"value", rows}});
  }
  std::cout << results.dump(2) << "\n";
  return 0;
}

int run_diff(const std::string& a_path, const std::string& b_path, bool numeric, long seed) {
  using namespace heatcas;
  const Expression a = parse_document(read_file(a_path));
  const Expression b = parse_document(read_file(b_path));
  if (difference(a, b).empty()) {
    std::cout << "documents are syntactically identical\n";
    return 0;
  }
  if (equivalent_mod_level(a, b)) {
    std::cout << "documents are equal modulo leveling\n";
    return 0;
  }
  if (!numeric) {
    std::cout << "documents differ syntactically (rerun with --numeric for a value check)\n";
    return 1;
  }
  double err = 0;
  for (int i = 0; i < 12; ++i) {
    const int dim = 2 + i % 3;
    const auto bg = free_background(static_cast<std::uint64_t>(seed) + i, 2 + i % 2, dim);
    err = std::max(err, max_entry(evaluate(a, bg) - evaluate(b, bg)));
  }
  std::cout << "max numeric difference over 12 sampled backgrounds: " << err << "\n";
  if (err < 1e-9) {
    std::cout << "documents are numerically equal\n";
    return 0;
  }
  return 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat-coefficient computer algebra for non-minimal operators"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "compute a heat coefficient");
  int order = 2;
  heatcas::Assumptions assume;
  std::string out_path, latex_path;
  compute->add_option("--order", order, "coefficient order")
      ->check(CLI::IsMember({0, 2, 4}))
      ->required();
  compute->add_flag("--n-zero", assume.n_zero, "assume N^mu = 0");
  compute->add_flag("--u-parallel", assume.u_parallel, "assume nabla-hat u = 0");
  compute->add_flag("--u-identity", assume.u_identity, "assume u = 1");
  compute->add_flag("--flat", assume.flat, "assume vanishing curvature");
  compute->add_option("--out", out_path, "output JSON document");
  compute->add_option("--latex", latex_path, "also export LaTeX");

  // check
  auto* check = app.add_subcommand("check", "run a randomized property suite");
  std::string suite = "all";
  int trials = 200;
  long seed = 42;
  check->add_option("--suite", suite, "suite name")
      ->check(CLI::IsMember({"spectral", "reduction", "geometry", "pipeline", "all"}));
  check->add_option("--trials", trials, "trials per identity");
  check->add_option("--seed", seed, "RNG seed");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a document on sampled backgrounds");
  std::string expr_path, samples_path;
  eval->add_option("--expr", expr_path, "term document")->required();
  eval->add_option("--samples", samples_path, "samples JSON")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "numeric heat-trace oracles");
  auto* torus = oracle->add_subcommand("torus1d", "circle heat-trace fit");
  int grid = 256;
  double tmin = 1e-3, tmax = 1e-1;
  std::string oracle_samples;
  torus->add_option("--grid", grid, "grid points");
  torus->add_option("--tmin", tmin, "smallest time");
  torus->add_option("--tmax", tmax, "largest time");
  torus->add_option("--samples", oracle_samples, "coefficient samples JSON")->required();
  oracle->require_subcommand(1);

  // diff
  auto* diff = app.add_subcommand("diff", "compare two term documents");
  std::string a_path, b_path;
  bool numeric = false;
  long diff_seed = 42;
  diff->add_option("--a", a_path, "first document")->required();
  diff->add_option("--b", b_path, "second document")->required();
  diff->add_flag("--numeric", numeric, "fall back to numeric comparison");
  diff->add_option("--seed", diff_seed, "RNG seed for numeric comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*compute) {
      const auto h = heatcas::compute_R(order, assume);
      const Expression e = heatcas::merged(h);
      heatcas::DocumentMeta meta;
      meta.order = order;
      meta.assumptions = assumptions_str(assume);
      meta.engine_version = kEngineVersion;
      meta.seed = 0;
      const std::string text = heatcas::serialize_document(e, meta);
      if (out_path.empty())
        std::cout << text;
      else
        write_file(out_path, text);
      if (!latex_path.empty()) write_file(latex_path, heatcas::export_latex(e));
      return 0;
    }
    if (*check) return run_check(suite, seed, trials);
    if (*eval) return run_eval(expr_path, samples_path);
    if (*torus) return run_oracle(oracle_samples, grid, tmin, tmax);
    if (*diff) return run_diff(a_path, b_path, numeric, diff_seed);
  } catch (const heatcas::GaugeAnomaly& ex) {
    std::cerr << "gauge anomaly: " << ex.what() << "\n";
    return 1;
  } catch (const heatcas::DiscretizationUnresolved& ex) {
    std::cerr << ex.what() << "\n";
    return 1;
  } catch (const heatcas::SchemaError& ex) {
    std::cerr << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
