#include "gces/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gces/errors.hpp"
#include "gces/libsvm.hpp"
#include "gces/random.hpp"

namespace gces {

using nlohmann::json;

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Synthetic: return "synthetic";
    case ProblemKind::SyntheticLogistic: return "synthetic_logistic";
    case ProblemKind::LibsvmQuadratic: return "libsvm_quadratic";
    case ProblemKind::LibsvmLogistic: return "libsvm_logistic";
  }
  return "unknown";
}

namespace {

ProblemKind parse_kind(const std::string& s) {
  for (ProblemKind k : {ProblemKind::Synthetic, ProblemKind::SyntheticLogistic,
                        ProblemKind::LibsvmQuadratic, ProblemKind::LibsvmLogistic}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown problem type '" + s + "'");
}

std::string_view solver_name(SolverId id) {
  switch (id) {
    case SolverId::Gces: return "gces";
    case SolverId::Fista: return "fista";
    case SolverId::Amgs: return "amgs";
  }
  return "unknown";
}

SolverSpec parse_solver(const json& j) {
  SolverSpec s;
  const std::string id = j.at("id").get<std::string>();
  if (id == "gces") {
    s.id = SolverId::Gces;
  } else if (id == "fista") {
    s.id = SolverId::Fista;
  } else if (id == "amgs") {
    s.id = SolverId::Amgs;
  } else {
    throw InvalidArgument("unknown solver id '" + id + "'");
  }
  s.eta_u = j.value("eta_u", 2.0);
  s.eta_d = j.value("eta_d", 0.9);
  s.label = std::string(solver_name(s.id));
  if (s.id == SolverId::Gces) {
    const json g0 = j.value("gamma0", json("proposed1"));
    if (g0.is_number()) {
      s.gces.gamma0_variant = Gamma0Variant::Explicit;
      s.gces.gamma0_explicit = g0.get<double>();
      s.label = "gces";
    } else {
      const std::string name = g0.get<std::string>();
      if (name == "proposed1") {
        s.gces.gamma0_variant = Gamma0Variant::Proposed1;
      } else if (name == "proposed2") {
        s.gces.gamma0_variant = Gamma0Variant::Proposed2;
      } else if (name == "proposed3") {
        s.gces.gamma0_variant = Gamma0Variant::Proposed3;
      } else {
        throw InvalidArgument("unknown gamma0 variant '" + name + "'");
      }
      s.label = name;
    }
    const std::string memory = j.value("memory", std::string("last"));
    if (memory == "last") {
      s.gces.memory_policy = MemoryPolicy::LastIterate;
    } else if (memory == "none") {
      s.gces.memory_policy = MemoryPolicy::None;
    } else {
      throw InvalidArgument("unknown memory policy '" + memory + "'");
    }
    s.gces.memory_capacity = j.value("memory_capacity", std::size_t{4});
    s.gces.eta_u = s.eta_u;
    s.gces.eta_d = s.eta_d;
  }
  s.label = j.value("label", s.label);
  return s;
}

void put_bytes(std::string& blob, const void* data, std::size_t n) {
  blob.append(static_cast<const char*>(data), n);
}

void put_double(std::string& blob, double x) { put_bytes(blob, &x, sizeof x); }

std::string hash_problem(const ZooProblem& z, const SparseMatrixCSR& A, const DenseVector& b,
                         const std::string& tag) {
  std::string blob = "gces-problem-v1|" + tag + "|";
  const std::uint64_t dims[] = {A.rows(), A.cols(), A.nnz()};
  put_bytes(blob, dims, sizeof dims);
  put_bytes(blob, A.row_offsets().data(), A.row_offsets().size_bytes());
  put_bytes(blob, A.col_indices().data(), A.col_indices().size_bytes());
  put_bytes(blob, A.values().data(), A.values().size_bytes());
  put_bytes(blob, b.data(), static_cast<std::size_t>(b.size()) * sizeof(double));
  put_double(blob, z.tau);
  put_double(blob, z.smooth->lipschitz_hint());
  put_double(blob, z.smooth->strong_convexity());
  blob += to_string(z.regularizer.kind());
  return sha256_hex(blob);
}

LabeledDataset load_dataset(const ProblemConfig& cfg, const std::filesystem::path& cache_dir,
                            bool offline) {
  ParseOptions po;
  std::filesystem::path file = cfg.path;
  if (!cfg.dataset.empty()) po.declared_features = lookup_dataset(cfg.dataset).n_features;
  if (file.empty()) {
    if (cfg.dataset.empty()) throw InvalidArgument("LIBSVM problem needs 'dataset' or 'path'");
    FetchOptions fo;
    fo.offline = offline;
    file = fetch_dataset(cfg.dataset, cache_dir, fo);
  }
  LabeledDataset ds = load_libsvm(file, po);
  if (cfg.max_rows != 0 || cfg.max_cols != 0) {
    ds.features = ds.features.truncated(cfg.max_rows, cfg.max_cols);
    ds.labels.conservativeResize(static_cast<Eigen::Index>(ds.features.rows()));
  }
  return ds;
}

void binarize(DenseVector& labels) {
  std::vector<double> sorted(labels.data(), labels.data() + labels.size());
  std::sort(sorted.begin(), sorted.end());
  const double med = median(sorted);
  for (Eigen::Index i = 0; i < labels.size(); ++i) labels[i] = labels[i] > med ? 1.0 : -1.0;
}

std::string fmt_double(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

}  // namespace

void RunConfig::validate() const {
  if (solvers.empty()) throw InvalidArgument("config: at least one solver is required");
  if (!(L0_factor > 0.0) || !std::isfinite(L0_factor)) {
    throw InvalidArgument("config: L0_factor must be > 0");
  }
  if (seeds.empty()) throw InvalidArgument("config: at least one seed is required");
  if (max_iters == 0) throw InvalidArgument("config: max_iters must be > 0");
  std::set<std::string> labels;
  for (const SolverSpec& s : solvers) {
    if (!labels.insert(s.label).second) {
      throw InvalidArgument("config: duplicate solver label '" + s.label + "'");
    }
  }
}

RunConfig parse_run_config(const json& j) {
  RunConfig cfg;
  const json& pj = j.at("problem");
  ProblemConfig& p = cfg.problem;
  p.kind = parse_kind(pj.at("type").get<std::string>());
  p.tau1 = pj.value("tau1", p.tau1);
  p.tau2 = pj.value("tau2", p.tau2);
  if (pj.contains("seed")) p.seed = pj.at("seed").get<std::uint64_t>();
  p.synthetic.m = pj.value("m", p.synthetic.m);
  p.synthetic.xi = pj.value("xi", p.synthetic.xi);
  p.logistic.rows = pj.value("rows", p.logistic.rows);
  p.logistic.cols = pj.value("cols", p.logistic.cols);
  p.logistic.density = pj.value("density", p.logistic.density);
  p.dataset = pj.value("dataset", std::string());
  p.path = pj.value("path", std::string());
  p.max_rows = pj.value("max_rows", std::size_t{0});
  p.max_cols = pj.value("max_cols", std::size_t{0});
  p.mu_from_tau1 = pj.value("mu", std::string("exact")) == "tau1";
  p.binarize_labels = pj.value("binarize", false);

  for (const json& s : j.at("solvers")) cfg.solvers.push_back(parse_solver(s));
  cfg.L0_factor = j.value("L0_factor", cfg.L0_factor);
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.target_gap = j.value("target_gap", cfg.target_gap);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.threads = j.value("threads", cfg.threads);
  const std::string scale = j.value("lambda_bound", std::string("current"));
  if (scale == "current") {
    cfg.lambda_scale = LambdaScale::Current;
  } else if (scale == "running_max") {
    cfg.lambda_scale = LambdaScale::RunningMax;
  } else {
    throw InvalidArgument("lambda_bound must be 'current' or 'running_max'");
  }
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    cfg.reference.max_iters = r.value("max_iters", cfg.reference.max_iters);
    cfg.reference.residual = r.value("residual", cfg.reference.residual);
    cfg.reference.agreement = r.value("agreement", cfg.reference.agreement);
    cfg.reference.stall_iters = r.value("stall_iters", cfg.reference.stall_iters);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  try {
    return parse_run_config(j);
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
}

BuiltProblem build_problem(const ProblemConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& cache_dir, bool offline) {
  const std::uint64_t data_seed = cfg.seed.value_or(seed);
  BuiltProblem bp;
  std::ostringstream desc;
  desc << to_string(cfg.kind);
  switch (cfg.kind) {
    case ProblemKind::Synthetic: {
      SyntheticSpec spec = cfg.synthetic;
      spec.seed = data_seed;
      spec.tau1 = cfg.tau1;
      spec.tau2 = cfg.tau2;
      QuadraticElasticNet q = make_synthetic(spec);
      if (cfg.mu_from_tau1) q.loss_strong_convexity = 0.0;
      desc << " m=" << spec.m << " xi=" << spec.xi << " seed=" << data_seed;
      bp.quadratic = q;
      break;
    }
    case ProblemKind::SyntheticLogistic: {
      SyntheticLogisticSpec spec = cfg.logistic;
      spec.seed = data_seed;
      spec.tau1 = cfg.tau1;
      spec.tau2 = cfg.tau2;
      desc << " " << spec.rows << "x" << spec.cols << " seed=" << data_seed;
      bp.logistic = make_synthetic_logistic(spec);
      break;
    }
    case ProblemKind::LibsvmQuadratic:
    case ProblemKind::LibsvmLogistic: {
      LabeledDataset ds = load_dataset(cfg, cache_dir, offline);
      desc << " " << (cfg.dataset.empty() ? cfg.path : cfg.dataset) << " " << ds.features.rows()
           << "x" << ds.features.cols();
      if (cfg.kind == ProblemKind::LibsvmQuadratic) {
        bp.quadratic = quadratic_from_dataset(ds, cfg.tau1, cfg.tau2);
      } else {
        if (cfg.binarize_labels) binarize(ds.labels);
        bp.logistic = logistic_from_dataset(ds, cfg.tau1, cfg.tau2);
      }
      break;
    }
  }
  desc << " tau1=" << fmt_double(cfg.tau1) << " tau2=" << fmt_double(cfg.tau2);
  if (bp.quadratic) {
    bp.zoo = quadratic_oracle(*bp.quadratic);
    bp.hash = hash_problem(bp.zoo, bp.quadratic->A, bp.quadratic->b, "quadratic");
  } else {
    bp.zoo = logistic_oracle(*bp.logistic);
    bp.hash = hash_problem(bp.zoo, bp.logistic->A, bp.logistic->b, "logistic");
  }
  bp.description = desc.str();
  return bp;
}

DenseVector random_start(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_vector(static_cast<Eigen::Index>(n));
}

CompositeProblem compose(const ZooProblem& z, const DenseVector& x0) {
  return apply_transfer(z.smooth, z.regularizer, z.tau, x0);
}

ReferenceReport reference_solve(const ZooProblem& z, const ReferenceBudget& budget) {
  const std::size_t n = z.smooth->dimension();
  const DenseVector x0 = DenseVector::Zero(static_cast<Eigen::Index>(n));
  const CompositeProblem p = compose(z, x0);

  GcesConfig g;
  g.gamma0_variant = Gamma0Variant::Proposed1;
  g.L0 = p.lipschitz_hat();
  g.max_iters = budget.max_iters;
  g.tolerance = budget.residual;
  // Stepping by hand keeps the best iterate and stops once F has not improved
  // for budget.stall_iters steps: near machine precision the accelerated
  // iterates wander at rounding level and the residual target may be out of
  // reach even though F has converged.
  GcesState state = initial_state(p, g, x0);
  DenseVector best_x = x0;
  double best_F = evaluate(p, x0).total;
  std::size_t since_best = 0;
  bool gces_converged = false;
  std::size_t gces_iters = 0;
  while (gces_iters < budget.max_iters && since_best < budget.stall_iters) {
    IterationTrace row;
    state = step(p, std::move(state), g, &row);
    ++gces_iters;
    ++since_best;
    if (row.F < best_F) {
      best_F = row.F;
      best_x = state.x;
      since_best = 0;
    }
    if (row.mapping_residual <= budget.residual) {
      gces_converged = true;
      break;
    }
  }

  FistaConfig f;
  f.L0 = p.lipschitz_hat();
  f.max_iters = budget.max_iters;
  f.tolerance = budget.residual;
  const SolveResult rf = fista_run(p, f, x0);

  ReferenceReport rep;
  rep.gces_value = best_F;
  rep.fista_value = evaluate(p, rf.solution).total;
  rep.gces_iterations = gces_iters;
  rep.fista_iterations = rf.trace.size();
  rep.gces_converged = gces_converged;
  rep.fista_converged = rf.converged;

  const double scale = std::max({1.0, std::abs(rep.gces_value), std::abs(rep.fista_value)});
  const bool agree = std::abs(rep.gces_value - rep.fista_value) <= budget.agreement * scale;
  if (!agree && !gces_converged && !rf.converged) {
    throw ReferenceFailure("reference solve: budget of " + std::to_string(budget.max_iters) +
                           " iterations exhausted; objectives " + fmt_double(rep.gces_value) +
                           " and " + fmt_double(rep.fista_value) + " disagree");
  }
  // When both objectives agree to within the tolerance, F alone cannot rank
  // the candidates: on a flat valley a last-digit difference in F hides a
  // large difference in x. The mapping residual at the global curvature
  // bound controls the distance to the minimizer, so it breaks the tie.
  bool gces_wins = rep.gces_value <= rep.fista_value;
  if (agree) {
    const double L = p.lipschitz_hat();
    const double r_gces = compute_mapping(p, L, best_x).reduced_grad.norm();
    const double r_fista = compute_mapping(p, L, rf.solution).reduced_grad.norm();
    gces_wins = r_gces <= r_fista;
  }
  rep.reference.x_star = gces_wins ? best_x : rf.solution;
  rep.reference.f_star = gces_wins ? rep.gces_value : rep.fista_value;
  rep.reference.verified = agree;
  return rep;
}

Reference cached_reference(const BuiltProblem& bp, const std::filesystem::path& cache_dir,
                           const ReferenceBudget& budget) {
  const std::filesystem::path dir = cache_dir / "reference";
  const std::filesystem::path file = dir / (bp.hash + ".json");
  const auto n = static_cast<Eigen::Index>(bp.zoo.smooth->dimension());
  if (std::filesystem::exists(file)) {
    try {
      std::ifstream in(file);
      const json j = json::parse(in);
      const auto xs = j.at("x_star").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(xs.size()) == n) {
        Reference r;
        r.x_star = Eigen::Map<const DenseVector>(xs.data(), n);
        r.f_star = j.at("f_star").get<double>();
        r.verified = j.at("verified").get<bool>();
        return r;
      }
    } catch (const json::exception&) {
      // Unreadable cache entry: recompute and overwrite it.
    }
  }
  Reference r = reference_solve(bp.zoo, budget).reference;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    json j;
    j["f_star"] = r.f_star;
    j["verified"] = r.verified;
    j["description"] = bp.description;
    j["x_star"] = std::vector<double>(r.x_star.data(), r.x_star.data() + r.x_star.size());
    const std::filesystem::path tmp =
        file.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp);
      out << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, file, ec);
  }
  return r;
}

bool RunRecord::certificate_ok() const {
  if (!error.empty()) return true;
  if (!L_ceiling_ok || !L_monotone) return false;
  if (certificate && !certificate->passed()) return false;
  return true;
}

bool BenchmarkSummary::any_certificate_violation() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunRecord& r) { return !r.certificate_ok(); });
}

bool BenchmarkSummary::any_error() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunRecord& r) { return !r.error.empty(); });
}

namespace {

json optional_number(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json BenchmarkSummary::to_json() const {
  json j;
  j["problem_hash"] = problem_hash;
  j["certificate_violation"] = any_certificate_violation();
  json rs = json::array();
  for (const RunRecord& r : runs) {
    json o;
    o["solver"] = r.solver;
    o["seed"] = r.seed;
    o["csv"] = r.csv_path;
    if (!r.error.empty()) o["error"] = r.error;
    o["iterations"] = r.iterations;
    o["converged"] = r.converged;
    o["iterations_to_target"] = optional_number(r.iterations_to_target);
    o["final_gap"] = finite_or_null(r.final_gap);
    o["min_gap"] = finite_or_null(r.min_gap);
    o["max_L"] = r.max_L;
    o["L_ceiling"] = r.L_ceiling;
    o["L_ceiling_ok"] = r.L_ceiling_ok;
    o["L_monotone"] = r.L_monotone;
    o["seconds"] = r.seconds;
    if (r.certificate) {
      const CertificateReport& c = *r.certificate;
      o["certificate"] = {{"regime", to_string(c.regime)},
                          {"initial_ok", c.initial_ok},
                          {"gap_violations", c.gap_violations},
                          {"gap_pass_rate", c.gap_pass_rate()},
                          {"lambda_checked", c.lambda_checked},
                          {"lambda_violations", c.lambda_violations},
                          {"lambda_violations_running_max", c.lambda_violations_running_max},
                          {"lambda_scale", to_string(c.scale)},
                          {"lambda_pass_rate", finite_or_null(c.lambda_pass_rate())},
                          {"passed", c.passed()}};
    }
    rs.push_back(std::move(o));
  }
  j["runs"] = std::move(rs);
  json ss = json::array();
  for (const SolverSummary& s : solvers) {
    ss.push_back({{"solver", s.solver},
                  {"runs", s.runs},
                  {"runs_reaching_target", s.runs_reaching_target},
                  {"median_iterations_to_target",
                   s.median_iterations_to_target ? json(*s.median_iterations_to_target) : json(nullptr)},
                  {"lambda_pass_rate", finite_or_null(s.lambda_pass_rate)},
                  {"gap_pass_rate", finite_or_null(s.gap_pass_rate)}});
  }
  j["solvers"] = std::move(ss);
  return j;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

struct Instance {
  BuiltProblem problem;
  Reference reference;
};

RunRecord run_one(const RunConfig& cfg, const SolverSpec& spec, const Instance& inst,
                  std::uint64_t seed, const std::filesystem::path& out_dir, bool write_files) {
  RunRecord rec;
  rec.solver = spec.label;
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const DenseVector x0 = random_start(inst.problem.zoo.smooth->dimension(), seed);
    const CompositeProblem p = compose(inst.problem.zoo, x0);
    const double L0 = cfg.L0_factor * p.lipschitz_hat();
    RunOptions opts;
    opts.reference = inst.reference;

    SolveResult res;
    switch (spec.id) {
      case SolverId::Gces: {
        GcesConfig g = spec.gces;
        g.L0 = L0;
        g.max_iters = cfg.max_iters;
        g.tolerance = cfg.tolerance;
        res = run_gces(p, g, x0, opts);
        rec.certificate =
            certificate_check(res, p, inst.reference.x_star, inst.reference.f_star, cfg.lambda_scale);
        rec.L_ceiling = std::max(g.eta_d * L0, g.eta_u * p.lipschitz_hat());
        break;
      }
      case SolverId::Fista: {
        FistaConfig f;
        f.L0 = L0;
        f.eta_u = spec.eta_u;
        f.max_iters = cfg.max_iters;
        f.tolerance = cfg.tolerance;
        res = fista_run(p, f, x0, opts);
        rec.L_ceiling = std::max(L0, spec.eta_u * p.lipschitz_hat());
        break;
      }
      case SolverId::Amgs: {
        AmgsConfig a;
        a.L0 = L0;
        a.eta_u = spec.eta_u;
        a.eta_d = spec.eta_d;
        a.max_iters = cfg.max_iters;
        a.tolerance = cfg.tolerance;
        res = amgs_run(p, a, x0, opts);
        // The first AMGS trial uses L0 itself.
        rec.L_ceiling = std::max(L0, spec.eta_u * p.lipschitz_hat());
        break;
      }
    }
    rec.iterations = res.trace.size();
    rec.converged = res.converged;
    rec.iterations_to_target = iterations_to_gap(res.trace, cfg.target_gap);
    double prev_L = 0.0;
    rec.min_gap = std::numeric_limits<double>::infinity();
    for (const IterationTrace& row : res.trace) {
      rec.max_L = std::max(rec.max_L, row.L);
      if (row.L < prev_L) rec.L_monotone = false;
      prev_L = row.L;
      rec.min_gap = std::min(rec.min_gap, row.gap);
    }
    if (spec.id != SolverId::Fista) rec.L_monotone = true;
    rec.L_ceiling_ok = rec.max_L <= rec.L_ceiling * (1.0 + 1e-12);
    if (!res.trace.empty()) rec.final_gap = res.trace.back().gap;
    if (write_files && !res.trace.empty()) {
      const std::filesystem::path csv = out_dir / (spec.label + "_seed" + std::to_string(seed) + ".csv");
      emit_trace_csv(res.trace, csv.string());
      rec.csv_path = csv.string();
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

}  // namespace

BenchmarkSummary run_benchmark(const RunConfig& cfg, const BenchOptions& options) {
  cfg.validate();
  const std::filesystem::path cache = options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;
  const std::filesystem::path out_dir = cfg.output_dir;
  if (options.write_files) std::filesystem::create_directories(out_dir);

  // One instance per distinct data seed.
  std::vector<std::uint64_t> data_seeds;
  std::map<std::uint64_t, std::size_t> instance_of;
  for (std::uint64_t s : cfg.seeds) {
    const std::uint64_t ds = cfg.problem.seed.value_or(s);
    if (instance_of.emplace(ds, data_seeds.size()).second) data_seeds.push_back(ds);
  }
  std::vector<Instance> instances(data_seeds.size());
  std::vector<std::string> build_errors(data_seeds.size());
  parallel_for(data_seeds.size(), cfg.threads, [&](std::size_t i) {
    try {
      instances[i].problem = build_problem(cfg.problem, data_seeds[i], cache, options.offline);
      instances[i].reference = cached_reference(instances[i].problem, cache, cfg.reference);
    } catch (const std::exception& e) {
      build_errors[i] = e.what();
    }
  });
  for (const std::string& e : build_errors) {
    if (!e.empty()) throw Error("building problem: " + e);
  }

  BenchmarkSummary summary;
  summary.problem_hash = instances.front().problem.hash;
  const std::size_t n_runs = cfg.solvers.size() * cfg.seeds.size();
  summary.runs.resize(n_runs);
  parallel_for(n_runs, cfg.threads, [&](std::size_t i) {
    const SolverSpec& spec = cfg.solvers[i / cfg.seeds.size()];
    const std::uint64_t seed = cfg.seeds[i % cfg.seeds.size()];
    const Instance& inst = instances[instance_of.at(cfg.problem.seed.value_or(seed))];
    summary.runs[i] = run_one(cfg, spec, inst, seed, out_dir, options.write_files);
  });

  for (std::size_t s = 0; s < cfg.solvers.size(); ++s) {
    SolverSummary ss;
    ss.solver = cfg.solvers[s].label;
    std::vector<double> its;
    std::size_t lambda_checked = 0, lambda_ok = 0, gap_rows = 0, gap_ok = 0;
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
      const RunRecord& r = summary.runs[s * cfg.seeds.size() + k];
      ++ss.runs;
      if (r.iterations_to_target) {
        its.push_back(static_cast<double>(*r.iterations_to_target));
        ++ss.runs_reaching_target;
      }
      if (r.certificate) {
        lambda_checked += r.certificate->lambda_checked;
        lambda_ok += r.certificate->lambda_checked - r.certificate->scaled_lambda_violations();
        gap_rows += r.certificate->rows.size();
        gap_ok += r.certificate->rows.size() - r.certificate->gap_violations;
      }
    }
    // The median counts only runs that reached the target; a solver that
    // missed it on some seed reports that through runs_reaching_target.
    if (!its.empty()) ss.median_iterations_to_target = median(its);
    if (lambda_checked > 0) ss.lambda_pass_rate = static_cast<double>(lambda_ok) / lambda_checked;
    if (gap_rows > 0) ss.gap_pass_rate = static_cast<double>(gap_ok) / gap_rows;
    summary.solvers.push_back(ss);
  }

  if (options.write_files) {
    std::ofstream out(out_dir / "summary.json");
    out << summary.to_json().dump(2) << '\n';
    if (!out) throw Error("cannot write summary.json in " + out_dir.string());
  }
  return summary;
}

}  // namespace gces
