#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gces/numeric.hpp"
#include "gces/problem.hpp"

namespace gces {

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// One row per completed iteration k = 1, 2, ...; row k describes x_k.
/// Quantities a solver does not define are NaN. The first eleven fields are
/// the CSV columns; the rest are in-memory diagnostics.
struct IterationTrace {
  std::size_t k = 0;
  double F = kNotApplicable;
  double gap = kNotApplicable;   // F(x_k) - F*, when a reference is known
  double dist = kNotApplicable;  // ||x_k - x*||
  double L = kNotApplicable;     // L_k
  double alpha = kNotApplicable; // alpha_{k-1}
  double gamma = kNotApplicable; // gamma_k
  double lambda = kNotApplicable;// lambda_k
  std::uint64_t grad_calls = 0;  // cumulative
  std::uint64_t prox_calls = 0;  // cumulative
  double sec = 0.0;

  double sigma = kNotApplicable;          // sigma_{k-1}
  double memory_weight = kNotApplicable;  // sum_j beta_j gamma_j at step k-1
  double alpha_residual = kNotApplicable; // |L a^2 - (1-a) gamma - a sigma| / scale
  double mapping_residual = kNotApplicable;  // ||y_{k-1} - x_k||
  std::size_t trials = 0;                    // line-search trials at step k-1
  std::uint64_t step_prox_calls = 0;         // prox calls spent on step k-1
};

/// Known optimum used to fill gap/dist while a solver runs.
struct Reference {
  DenseVector x_star;
  double f_star = 0.0;
  bool verified = false;
};

struct RunOptions {
  std::optional<Reference> reference;
  /// Record wall time in IterationTrace::sec; off by default so traces are
  /// reproducible byte for byte.
  bool wall_clock = false;
};

/// Start-of-run data certificate checks need next to the trace.
struct InitialPoint {
  DenseVector x0;
  double F0 = 0.0;
  double gamma0 = kNotApplicable;
  double L0 = 0.0;
};

struct SolveResult {
  std::string solver;
  DenseVector solution;
  std::vector<IterationTrace> trace;
  InitialPoint initial;
  bool converged = false;
  OracleCounters counters;
};

/// Header of trace CSV files.
inline constexpr const char* kTraceCsvHeader = "k,F,gap,dist,L,alpha,gamma,lambda,grad_calls,prox_calls,sec";

/// Writes one header line plus one row per iteration, floats with 17
/// significant digits. Throws InvalidArgument on an empty trace (no file is
/// created) and Error on I/O failure.
void emit_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path);
std::string format_trace_csv(const std::vector<IterationTrace>& trace);
/// Parses what format_trace_csv produces (only the CSV columns).
std::vector<IterationTrace> read_trace_csv(const std::string& path);

/// First k with gap <= tol, if any.
std::optional<std::size_t> iterations_to_gap(const std::vector<IterationTrace>& trace, double tol);

/// Fills gap and dist of a trace row from a reference.
void annotate(IterationTrace& row, const DenseVector& x, const std::optional<Reference>& ref);

}  // namespace gces
