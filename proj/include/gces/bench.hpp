#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gces/baselines.hpp"
#include "gces/certificates.hpp"
#include "gces/solver_gces.hpp"
#include "gces/trace.hpp"
#include "gces/zoo.hpp"

namespace gces {

enum class ProblemKind { Synthetic, SyntheticLogistic, LibsvmQuadratic, LibsvmLogistic };

std::string to_string(ProblemKind k);

struct ProblemConfig {
  ProblemKind kind = ProblemKind::Synthetic;
  SyntheticSpec synthetic;
  SyntheticLogisticSpec logistic;
  /// Registry name for the LIBSVM kinds; `path` overrides the cache lookup.
  std::string dataset;
  std::string path;
  double tau1 = 1e-3;
  double tau2 = 1e-3;
  std::size_t max_rows = 0;  // 0 = keep all
  std::size_t max_cols = 0;
  /// Pins the generator seed; otherwise each run seed also seeds the data.
  std::optional<std::uint64_t> seed;
  /// Feed mu_f = tau1 instead of the exact curvature of synthetic instances.
  bool mu_from_tau1 = false;
  /// Replace real-valued labels by sign(label - median) (logistic only).
  bool binarize_labels = false;
};

enum class SolverId { Gces, Fista, Amgs };

struct SolverSpec {
  SolverId id = SolverId::Gces;
  std::string label;  // file stem; unique within a config
  GcesConfig gces;    // L0, max_iters and tolerance are filled per run
  double eta_u = 2.0;
  double eta_d = 0.9;
};

struct ReferenceBudget {
  std::size_t max_iters = 200000;
  double residual = 1e-12;
  double agreement = 1e-9;  // relative objective agreement
  /// GCES stops after this many steps without a new best objective.
  std::size_t stall_iters = 2000;
};

struct RunConfig {
  ProblemConfig problem;
  std::vector<SolverSpec> solvers;
  double L0_factor = 1.0;
  std::vector<std::uint64_t> seeds{0};
  std::size_t max_iters = 1000;
  double tolerance = 1e-10;
  double target_gap = 1e-6;
  std::string output_dir = "out";
  std::size_t threads = 0;  // 0 = hardware concurrency
  LambdaScale lambda_scale = LambdaScale::Current;
  ReferenceBudget reference;

  /// Throws InvalidArgument: no solvers, duplicate labels, L0_factor <= 0,
  /// no seeds.
  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

struct BuiltProblem {
  ZooProblem zoo;
  std::optional<QuadraticElasticNet> quadratic;
  std::optional<LogisticElasticNet> logistic;
  /// SHA-256 over the data, weights and regularizer; keys the reference cache.
  std::string hash;
  std::string description;
};

BuiltProblem build_problem(const ProblemConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& cache_dir, bool offline);

/// Standard normal entries from a generator seeded with `seed`.
DenseVector random_start(std::size_t n, std::uint64_t seed);

/// CompositeProblem for a zoo problem anchored at x0.
CompositeProblem compose(const ZooProblem& z, const DenseVector& x0);

struct ReferenceReport {
  Reference reference;
  double gces_value = 0.0;
  double fista_value = 0.0;
  std::size_t gces_iterations = 0;
  std::size_t fista_iterations = 0;
  bool gces_converged = false;
  bool fista_converged = false;
};

/// High-accuracy optimum from GCES and FISTA run to the residual target.
/// The lower objective wins; verified when both agree to budget.agreement.
/// Throws ReferenceFailure when neither reached the residual and they
/// disagree.
ReferenceReport reference_solve(const ZooProblem& z, const ReferenceBudget& budget = {});

/// reference_solve with results cached in cache_dir/reference/<hash>.json.
Reference cached_reference(const BuiltProblem& bp, const std::filesystem::path& cache_dir,
                           const ReferenceBudget& budget = {});

struct RunRecord {
  std::string solver;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string error;  // nonempty when the run threw
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<std::size_t> iterations_to_target;
  double final_gap = kNotApplicable;
  double min_gap = kNotApplicable;
  double max_L = 0.0;
  double L_ceiling = 0.0;
  bool L_ceiling_ok = true;
  bool L_monotone = true;  // only required for FISTA
  std::optional<CertificateReport> certificate;  // GCES runs only
  double seconds = 0.0;

  bool certificate_ok() const;
};

struct SolverSummary {
  std::string solver;
  std::optional<double> median_iterations_to_target;
  std::size_t runs_reaching_target = 0;
  std::size_t runs = 0;
  double lambda_pass_rate = kNotApplicable;
  double gap_pass_rate = kNotApplicable;
};

struct BenchmarkSummary {
  std::vector<RunRecord> runs;
  std::vector<SolverSummary> solvers;
  std::string problem_hash;

  bool any_certificate_violation() const;
  bool any_error() const;
  nlohmann::json to_json() const;
};

struct BenchOptions {
  std::filesystem::path cache_dir;  // empty = default_cache_dir()
  bool offline = false;
  bool write_files = true;
};

/// Runs every (solver, seed) pair, writes <label>_seed<seed>.csv per run and
/// summary.json into cfg.output_dir. Failed runs are recorded, not thrown.
BenchmarkSummary run_benchmark(const RunConfig& cfg, const BenchOptions& options = {});

double median(std::vector<double> values);

}  // namespace gces
