#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gces/bench.hpp"
#include "gces/errors.hpp"
#include "gces/libsvm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCertificate = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_rows;
  std::optional<std::size_t> max_cols;
  bool offline = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool need_config) {
  auto* opt = cmd->add_option("--config", f.config, "Run configuration (JSON)");
  if (need_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", f.seed, "Run a single seed");
  cmd->add_option("--max-rows", f.max_rows, "Keep the first N rows of a LIBSVM dataset");
  cmd->add_option("--max-cols", f.max_cols, "Drop LIBSVM columns with index >= N");
  cmd->add_flag("--offline", f.offline, "Never touch the network");
}

gces::RunConfig configured(const CommonFlags& f) {
  gces::RunConfig cfg = gces::load_run_config(f.config);
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.seed) cfg.seeds = {*f.seed};
  if (f.max_rows) cfg.problem.max_rows = *f.max_rows;
  if (f.max_cols) cfg.problem.max_cols = *f.max_cols;
  return cfg;
}

void print_summary(const gces::BenchmarkSummary& s) {
  for (const gces::RunRecord& r : s.runs) {
    std::printf("%-12s seed=%-6llu iters=%-6zu", r.solver.c_str(),
                static_cast<unsigned long long>(r.seed), r.iterations);
    if (!r.error.empty()) {
      std::printf(" ERROR %s\n", r.error.c_str());
      continue;
    }
    if (r.iterations_to_target) {
      std::printf(" to_target=%-6zu", *r.iterations_to_target);
    } else {
      std::printf(" to_target=%-6s", "-");
    }
    std::printf(" final_gap=%.3e max_L=%.4g%s", r.final_gap, r.max_L, r.L_ceiling_ok ? "" : " L_CEILING");
    if (r.certificate) {
      std::printf(" cert=%s", r.certificate->passed() ? "ok" : "VIOLATED");
    }
    std::printf("\n");
  }
  for (const gces::SolverSummary& ss : s.solvers) {
    std::printf("summary %-12s reached=%zu/%zu median_to_target=", ss.solver.c_str(),
                ss.runs_reaching_target, ss.runs);
    if (ss.median_iterations_to_target) {
      std::printf("%g\n", *ss.median_iterations_to_target);
    } else {
      std::printf("-\n");
    }
  }
}

int finish(const gces::BenchmarkSummary& s) {
  print_summary(s);
  if (s.any_error()) return kExitError;
  return s.any_certificate_violation() ? kExitCertificate : kExitOk;
}

gces::BenchOptions bench_options(const CommonFlags& f) {
  gces::BenchOptions o;
  o.offline = f.offline;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated composite solvers with memory: benchmarks and tools"};
  app.require_subcommand(1);

  CommonFlags solve_f;
  std::string solver_label;
  auto* solve = app.add_subcommand("solve", "Run one solver of a config on one seed");
  add_common(solve, solve_f, true);
  solve->add_option("--solver", solver_label, "Solver label from the config (default: first)");

  CommonFlags bench_f;
  auto* bench = app.add_subcommand("bench", "Run every (solver, seed) pair of a config");
  add_common(bench, bench_f, true);

  CommonFlags gen_f;
  gces::SyntheticSpec spec;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic diagonal instance as LIBSVM text");
  gen->add_option("--out", gen_f.out, "Output file")->required();
  gen->add_option("--seed", gen_f.seed, "Generator seed");
  gen->add_option("--m", spec.m, "Dimension")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  gen->add_option("--xi", spec.xi, "Condition exponent")->check(CLI::Range(1, 300));

  CommonFlags ref_f;
  auto* ref = app.add_subcommand("reference", "Compute or load the cached optimum of a config's problem");
  add_common(ref, ref_f, true);

  CommonFlags fetch_f;
  std::vector<std::string> names;
  auto* fetch = app.add_subcommand("fetch", "Download registry datasets into the cache");
  fetch->add_option("names", names, "Dataset names (a1a, rcv1.binary, triazine)")->required();
  fetch->add_option("--out", fetch_f.out, "Cache directory (default: $GCES_CACHE or ~/.cache/gces)");
  fetch->add_flag("--offline", fetch_f.offline, "Only verify cached files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) {
      gces::RunConfig cfg = configured(solve_f);
      if (!solve_f.seed) cfg.seeds.resize(1);
      std::vector<gces::SolverSpec> chosen;
      for (const gces::SolverSpec& s : cfg.solvers) {
        if (solver_label.empty() || s.label == solver_label) {
          chosen.push_back(s);
          break;
        }
      }
      if (chosen.empty()) throw gces::InvalidArgument("no solver labelled '" + solver_label + "'");
      cfg.solvers = chosen;
      return finish(gces::run_benchmark(cfg, bench_options(solve_f)));
    }
    if (*bench) {
      return finish(gces::run_benchmark(configured(bench_f), bench_options(bench_f)));
    }
    if (*gen) {
      spec.seed = gen_f.seed.value_or(0);
      const gces::QuadraticElasticNet q = gces::make_synthetic(spec);
      gces::LabeledDataset ds;
      ds.features = q.A;
      ds.labels = q.b;
      std::ofstream out(gen_f.out, std::ios::binary);
      if (!out) throw gces::Error("cannot write " + gen_f.out);
      out << gces::serialize_libsvm(ds);
      if (!out) throw gces::Error("short write to " + gen_f.out);
      std::printf("wrote %zux%zu instance to %s\n", q.A.rows(), q.A.cols(), gen_f.out.c_str());
      return kExitOk;
    }
    if (*ref) {
      const gces::RunConfig cfg = configured(ref_f);
      const std::filesystem::path cache = gces::default_cache_dir();
      const gces::BuiltProblem bp =
          gces::build_problem(cfg.problem, cfg.seeds.front(), cache, ref_f.offline);
      const gces::Reference r = gces::cached_reference(bp, cache, cfg.reference);
      std::printf("problem %s\nhash %s\nf_star %.17g\nverified %s\n", bp.description.c_str(),
                  bp.hash.c_str(), r.f_star, r.verified ? "yes" : "no");
      if (!ref_f.out.empty()) {
        std::filesystem::create_directories(ref_f.out);
        nlohmann::json j;
        j["hash"] = bp.hash;
        j["f_star"] = r.f_star;
        j["verified"] = r.verified;
        j["x_star"] = std::vector<double>(r.x_star.data(), r.x_star.data() + r.x_star.size());
        std::ofstream out(std::filesystem::path(ref_f.out) / "reference.json");
        out << j.dump() << '\n';
      }
      return kExitOk;
    }
    if (*fetch) {
      const std::filesystem::path cache =
          fetch_f.out.empty() ? gces::default_cache_dir() : std::filesystem::path(fetch_f.out);
      gces::FetchOptions fo;
      fo.offline = fetch_f.offline;
      for (const std::string& n : names) {
        std::printf("%s\n", gces::fetch_dataset(n, cache, fo).string().c_str());
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
