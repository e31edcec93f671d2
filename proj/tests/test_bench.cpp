#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gces/bench.hpp"
#include "gces/errors.hpp"
#include "oracles.hpp"

using namespace gces;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gces_bench_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json small_config(const fs::path& out) {
  return json{{"problem", {{"type", "synthetic"}, {"m", 40}, {"xi", 2}, {"tau1", 1e-2}, {"tau2", 1e-3}, {"seed", 2}}},
              {"solvers",
               {{{"id", "gces"}, {"gamma0", "proposed2"}},
                {{"id", "gces"}, {"gamma0", "proposed1"}, {"label", "p1"}},
                {{"id", "fista"}},
                {{"id", "amgs"}}}},
              {"seeds", {1, 2}},
              {"max_iters", 300},
              {"tolerance", 1e-12},
              {"output_dir", out.string()},
              {"threads", 4}};
}

double closed_form_value(const QuadraticElasticNet& q, const DenseVector& x) {
  return oracle::dense_quadratic_value(q.A.to_dense(), q.b, q.tau1, x) + q.tau2 * x.lpNorm<1>();
}

}  // namespace

TEST(Config, ParsesSolversAndDefaults) {
  const RunConfig cfg = parse_run_config(small_config("/tmp/x"));
  ASSERT_EQ(cfg.solvers.size(), 4u);
  EXPECT_EQ(cfg.solvers[0].id, SolverId::Gces);
  EXPECT_EQ(cfg.solvers[0].gces.gamma0_variant, Gamma0Variant::Proposed2);
  EXPECT_EQ(cfg.solvers[1].label, "p1");
  EXPECT_EQ(cfg.solvers[2].id, SolverId::Fista);
  EXPECT_EQ(cfg.problem.synthetic.m, 40u);
  EXPECT_EQ(cfg.problem.seed, std::optional<std::uint64_t>(2));
  EXPECT_EQ(cfg.lambda_scale, LambdaScale::Current);
  EXPECT_EQ(cfg.L0_factor, 1.0);
}

TEST(Config, Errors) {
  json j = small_config("/tmp/x");
  j["solvers"] = json::array();
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["solvers"] = {{{"id", "fista"}}, {{"id", "fista"}}};
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["solvers"] = {{{"id", "newton"}}};
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["solvers"] = {{{"id", "gces"}, {"gamma0", "proposed9"}}};
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["problem"]["type"] = "cubic";
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["L0_factor"] = 0.0;
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["seeds"] = json::array();
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  j = small_config("/tmp/x");
  j["lambda_bound"] = "sometimes";
  EXPECT_THROW(parse_run_config(j), InvalidArgument);

  const fs::path dir = fresh_dir("badjson");
  {
    std::ofstream out(dir / "c.json");
    out << "{ not json";
  }
  EXPECT_THROW(load_run_config(dir / "c.json"), InvalidArgument);
  EXPECT_THROW(load_run_config(dir / "missing.json"), Error);
}

TEST(Reference, MatchesClosedFormWithoutRegularizer) {
  SyntheticSpec s;
  s.m = 30;
  s.xi = 2;
  s.seed = 5;
  s.tau1 = 1e-2;
  s.tau2 = 0.0;
  const QuadraticElasticNet q = make_synthetic(s);
  ZooProblem z = quadratic_oracle(q);
  z.regularizer = ProxSpec::zero();
  z.tau = 0.0;
  const ReferenceReport rep = reference_solve(z);
  const DenseVector d = q.A.to_dense().diagonal();
  const DenseVector x = oracle::diagonal_elastic_net_solution(d, q.b, q.tau1, 0.0);
  EXPECT_LE((rep.reference.x_star - x).norm(), 1e-8);
  EXPECT_NEAR(rep.reference.f_star, closed_form_value(q, x), 1e-12);
  EXPECT_TRUE(rep.reference.verified);
}

TEST(Reference, MatchesClosedFormElasticNet) {
  SyntheticSpec s;
  s.m = 50;
  s.xi = 2;
  s.seed = 6;
  s.tau1 = 1e-3;
  s.tau2 = 1e-3;
  const QuadraticElasticNet q = make_synthetic(s);
  const ReferenceReport rep = reference_solve(quadratic_oracle(q));
  const DenseVector d = q.A.to_dense().diagonal();
  const DenseVector x = oracle::diagonal_elastic_net_solution(d, q.b, q.tau1, q.tau2);
  EXPECT_LE((rep.reference.x_star - x).norm(), 1e-8);
  EXPECT_NEAR(rep.reference.f_star, closed_form_value(q, x), 1e-12);
}

TEST(Reference, LargeL1WeightGivesZero) {
  SyntheticSpec s;
  s.m = 20;
  s.xi = 1;
  s.seed = 1;
  s.tau1 = 1e-2;
  s.tau2 = 10.0;  // above ||A^T b||_inf
  const QuadraticElasticNet q = make_synthetic(s);
  const ReferenceReport rep = reference_solve(quadratic_oracle(q));
  EXPECT_LE(rep.reference.x_star.lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_NEAR(rep.reference.f_star, 0.5 * q.b.squaredNorm(), 1e-12);
}

TEST(Reference, CachedOnDisk) {
  const fs::path cache = fresh_dir("refcache");
  ProblemConfig pc;
  pc.synthetic.m = 30;
  pc.synthetic.xi = 2;
  pc.tau1 = 1e-2;
  pc.tau2 = 1e-3;
  const BuiltProblem bp = build_problem(pc, 4, cache, true);
  const Reference a = cached_reference(bp, cache);
  EXPECT_TRUE(fs::exists(cache / "reference" / (bp.hash + ".json")));
  const Reference b = cached_reference(bp, cache);
  EXPECT_EQ(a.f_star, b.f_star);
  EXPECT_EQ(a.x_star, b.x_star);
  const BuiltProblem other = build_problem(pc, 5, cache, true);
  EXPECT_NE(other.hash, bp.hash);
}

TEST(Build, OfflineLibsvmWithoutCacheFails) {
  const fs::path cache = fresh_dir("nocache");
  ProblemConfig pc;
  pc.kind = ProblemKind::LibsvmQuadratic;
  pc.dataset = "a1a";
  EXPECT_THROW(build_problem(pc, 0, cache, true), FetchError);
}

TEST(Build, LibsvmFromLocalPath) {
  const fs::path dir = fresh_dir("localpath");
  {
    std::ofstream out(dir / "d.svm");
    out << "1 1:1 2:0.5\n0 2:1 3:2\n1 1:0.2 3:1\n";
  }
  ProblemConfig pc;
  pc.kind = ProblemKind::LibsvmLogistic;
  pc.path = (dir / "d.svm").string();
  pc.tau1 = 1e-2;
  pc.tau2 = 1e-3;
  pc.max_rows = 2;
  const BuiltProblem bp = build_problem(pc, 0, dir, true);
  ASSERT_TRUE(bp.logistic.has_value());
  EXPECT_EQ(bp.logistic->A.rows(), 2u);
  EXPECT_EQ(bp.logistic->b[1], -1.0);
}

TEST(Bench, DeterministicAndComplete) {
  const fs::path cache = fresh_dir("cache_det");
  const fs::path out1 = fresh_dir("det1");
  const fs::path out2 = fresh_dir("det2");
  BenchOptions opt;
  opt.cache_dir = cache;
  const auto s1 = run_benchmark(parse_run_config(small_config(out1)), opt);
  json c2 = small_config(out2);
  c2["threads"] = 1;
  const auto s2 = run_benchmark(parse_run_config(c2), opt);
  EXPECT_FALSE(s1.any_error());
  ASSERT_EQ(s1.runs.size(), 8u);
  for (const char* label : {"proposed2", "p1", "fista", "amgs"}) {
    for (int seed : {1, 2}) {
      const std::string name = std::string(label) + "_seed" + std::to_string(seed) + ".csv";
      ASSERT_TRUE(fs::exists(out1 / name)) << name;
      EXPECT_EQ(slurp(out1 / name), slurp(out2 / name)) << name;
    }
  }
  EXPECT_TRUE(fs::exists(out1 / "summary.json"));
  const json summary = json::parse(slurp(out1 / "summary.json"));
  EXPECT_EQ(summary["runs"].size(), 8u);
  EXPECT_EQ(summary["solvers"].size(), 4u);
}

TEST(Bench, GapsAreNonNegativeAndCeilingsHold) {
  const fs::path out = fresh_dir("gaps");
  BenchOptions opt;
  opt.cache_dir = fresh_dir("cache_gaps");
  const auto s = run_benchmark(parse_run_config(small_config(out)), opt);
  for (const auto& r : s.runs) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GE(r.min_gap, -1e-9) << r.solver;
    EXPECT_TRUE(r.L_ceiling_ok) << r.solver;
    EXPECT_TRUE(r.L_monotone) << r.solver;
    for (const auto& row : read_trace_csv(r.csv_path)) EXPECT_GE(row.gap, -1e-9);
  }
}

TEST(Bench, CeilingsHoldForLargeInitialEstimate) {
  const fs::path out = fresh_dir("ceil10");
  json j = small_config(out);
  j["L0_factor"] = 10.0;
  BenchOptions opt;
  opt.cache_dir = fresh_dir("cache_ceil10");
  const auto s = run_benchmark(parse_run_config(j), opt);
  for (const auto& r : s.runs) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_TRUE(r.L_ceiling_ok) << r.solver << " max L " << r.max_L << " ceiling " << r.L_ceiling;
  }
}

TEST(Bench, GammaSettlesBetweenMuAndTwiceMu) {
  // Over the trailing half of a long run gamma_k stays in [mu, 2 mu] for the
  // memory variant, since sigma_k lies in that band once gamma has decayed.
  SyntheticSpec spec;
  spec.m = 40;
  spec.xi = 2;
  spec.seed = 3;
  spec.tau1 = 1e-2;
  const ZooProblem z = quadratic_oracle(make_synthetic(spec));
  const DenseVector x0 = random_start(40, 1);
  const CompositeProblem p = compose(z, x0);
  GcesConfig g;
  g.gamma0_variant = Gamma0Variant::Proposed3;
  g.L0 = p.lipschitz_hat();
  g.max_iters = 600;
  g.tolerance = 0.0;
  const SolveResult r = run_gces(p, g, x0);
  const double mu = p.mu_hat();
  for (std::size_t i = r.trace.size() / 2; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].gamma, mu * (1.0 - 1e-12));
    EXPECT_LE(r.trace[i].gamma, 2.0 * mu * (1.0 + 1e-12));
  }
  // The step |gamma_{k+1} - gamma_k| does not grow over the same window,
  // beyond rounding of gamma itself.
  for (std::size_t i = r.trace.size() / 2 + 1; i + 1 < r.trace.size(); ++i) {
    const double before = std::abs(r.trace[i].gamma - r.trace[i - 1].gamma);
    const double after = std::abs(r.trace[i + 1].gamma - r.trace[i].gamma);
    EXPECT_LE(after, before + 1e-14 * mu);
  }
}

TEST(Bench, FailedRunIsRecordedNotThrown) {
  const fs::path out = fresh_dir("fail");
  json j = small_config(out);
  j["solvers"] = {{{"id", "gces"}, {"gamma0", 1e6}}};  // outside the admissible range
  BenchOptions opt;
  opt.cache_dir = fresh_dir("cache_fail");
  const auto s = run_benchmark(parse_run_config(j), opt);
  EXPECT_TRUE(s.any_error());
  EXPECT_FALSE(s.any_certificate_violation());
}

TEST(Median, Values) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), InvalidArgument);
}
