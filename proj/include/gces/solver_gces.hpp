#pragma once

#include <cstddef>
#include <vector>
#include <span>
#include <string_view>

#include "gces/gradient_mapping.hpp"
#include "gces/problem.hpp"
#include "gces/trace.hpp"

namespace gces {

/// Initialization rule for gamma_0.
enum class Gamma0Variant {
  Proposed1,  // gamma_0 = 0
  Proposed2,  // gamma_0 = mu_hat
  Proposed3,  // gamma_0 = 3 L_0 + mu_hat
  Explicit,   // gamma_0 = GcesConfig::gamma0_explicit
};

enum class MemoryPolicy {
  LastIterate,  // weight only the (gamma_{k-1}, v_{k-1}) term
  None,         // no memory: sigma_k == mu_hat
};

std::string_view to_string(Gamma0Variant v);
std::string_view to_string(MemoryPolicy m);

inline constexpr std::size_t kMaxLineSearchTrials = 64;

struct GcesConfig {
  Gamma0Variant gamma0_variant = Gamma0Variant::Proposed1;
  double gamma0_explicit = 0.0;
  double L0 = 1.0;
  double eta_u = 2.0;
  double eta_d = 0.9;
  std::size_t max_iters = 1000;
  /// Stop once ||r_{L_k}(y_k)|| / L_k <= tolerance.
  double tolerance = 1e-10;
  MemoryPolicy memory_policy = MemoryPolicy::LastIterate;
  /// Number of past (gamma_j, v_j) pairs retained; only the newest is weighted.
  std::size_t memory_capacity = 4;

  /// Throws InvalidArgument on eta_u <= 1, eta_d outside (0, 1], L0 <= 0,
  /// memory_capacity == 0 with LastIterate.
  void validate() const;
};

/// gamma_0 for the configured variant. Explicit values must lie in
/// [0, mu_hat] U [2 mu_hat, 3 L0 + mu_hat].
double resolve_gamma0(const GcesConfig& cfg, double mu_hat);

struct MemoryTerm {
  std::size_t index = 0;  // j
  double gamma = 0.0;     // gamma_j
  DenseVector v;          // v_j
  double beta_weight = 0.0;
};

struct GcesState {
  std::size_t k = 0;
  DenseVector x;
  DenseVector v;
  double gamma = 0.0;
  double L = 0.0;
  double lambda = 1.0;
  std::vector<MemoryTerm> memory;  // oldest first
  OracleCounters counters;

  /// sum_j beta_{j,k} gamma_j over the memory.
  double memory_weight() const;
};

GcesState initial_state(const CompositeProblem& p, const GcesConfig& cfg, const DenseVector& x0);

/// Sets the beta weights for iteration state.k: only j = k - 1 (j >= 1) is
/// active, with beta = min(1, mu_hat / gamma_{k-1}), then scaled down so
/// that sum beta gamma <= min(gamma_k, mu_hat). gamma_{k-1} == 0 gives 0.
void select_beta(GcesState& state, double mu_hat, MemoryPolicy policy = MemoryPolicy::LastIterate);

/// sigma_k = mu_hat + sum_j beta_{j,k} gamma_j.
double compute_sigma(const GcesState& state, double mu_hat);

/// Positive root of L a^2 = (1 - a) gamma + a sigma. Lies in (0, 1] when
/// sigma <= L. Throws DegenerateState if sigma == gamma == 0.
double solve_alpha(double sigma, double gamma, double L);

/// (gamma' x + a gamma v + a^2 sum beta_j gamma_j v_j) /
/// (gamma' + a gamma + a^2 sum beta_j gamma_j).
DenseVector update_y(const DenseVector& x, const DenseVector& v, double gamma, double gamma_next,
                     double alpha, std::span<const MemoryTerm> memory);

/// (1/gamma') [(1 - a) gamma v + a (mu_hat y + sum beta_j gamma_j v_j - r_L(y))].
DenseVector update_v(const GcesState& state, double alpha, double gamma_next, const DenseVector& y,
                     const MappingResult& mapping, double mu_hat);

struct TrialResult {
  double L = 0.0;
  double alpha = 0.0;
  double gamma_next = 0.0;
  double sigma = 0.0;
  double memory_weight = 0.0;
  DenseVector y;
  DenseVector x_next;
  DenseVector v_next;
  MappingResult mapping;
  std::size_t trials = 0;
  std::uint64_t prox_calls = 0;
  /// |L a^2 - (1 - a) gamma - a sigma| relative to the larger side.
  double alpha_residual = 0.0;
};

/// Line search of one iteration: starts at eta_d L_k, multiplies by eta_u
/// until F(x+) <= m_L(y; x+). Expects select_beta to have run for state.k.
/// Throws LineSearchFailure after kMaxLineSearchTrials rejected trials.
TrialResult backtracking_step(const CompositeProblem& p, GcesState& state, const GcesConfig& cfg);

/// One full iteration: weights, line search, commit, memory push.
GcesState step(const CompositeProblem& p, GcesState state, const GcesConfig& cfg,
               IterationTrace* record = nullptr);

SolveResult run_gces(const CompositeProblem& p, const GcesConfig& cfg, const DenseVector& x0,
                     const RunOptions& options = {});

}  // namespace gces
