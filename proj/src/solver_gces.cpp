#include "gces/solver_gces.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "gces/errors.hpp"

namespace gces {

std::string_view to_string(Gamma0Variant v) {
  switch (v) {
    case Gamma0Variant::Proposed1:
      return "proposed1";
    case Gamma0Variant::Proposed2:
      return "proposed2";
    case Gamma0Variant::Proposed3:
      return "proposed3";
    case Gamma0Variant::Explicit:
      return "explicit";
  }
  return "unknown";
}

std::string_view to_string(MemoryPolicy m) {
  return m == MemoryPolicy::LastIterate ? "last_iterate" : "none";
}

void GcesConfig::validate() const {
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument("GcesConfig: L0 must be positive");
  if (!(eta_u > 1.0)) throw InvalidArgument("GcesConfig: eta_u must be > 1");
  if (!(eta_d > 0.0 && eta_d <= 1.0)) throw InvalidArgument("GcesConfig: eta_d must lie in (0, 1]");
  if (!(tolerance >= 0.0)) throw InvalidArgument("GcesConfig: tolerance must be >= 0");
  if (memory_policy == MemoryPolicy::LastIterate && memory_capacity == 0) {
    throw InvalidArgument("GcesConfig: memory_capacity must be >= 1");
  }
}

double resolve_gamma0(const GcesConfig& cfg, double mu_hat) {
  switch (cfg.gamma0_variant) {
    case Gamma0Variant::Proposed1:
      return 0.0;
    case Gamma0Variant::Proposed2:
      return mu_hat;
    case Gamma0Variant::Proposed3:
      return 3.0 * cfg.L0 + mu_hat;
    case Gamma0Variant::Explicit:
      break;
  }
  const double g = cfg.gamma0_explicit;
  const bool low = g >= 0.0 && g <= mu_hat;
  const bool high = g >= 2.0 * mu_hat && g <= 3.0 * cfg.L0 + mu_hat;
  if (!(low || high)) {
    throw InvalidArgument("gamma0 = " + std::to_string(g) +
                          " outside [0, mu] U [2 mu, 3 L0 + mu] for mu = " + std::to_string(mu_hat));
  }
  return g;
}

double GcesState::memory_weight() const {
  double s = 0.0;
  for (const auto& m : memory) s += m.beta_weight * m.gamma;
  return s;
}

GcesState initial_state(const CompositeProblem& p, const GcesConfig& cfg, const DenseVector& x0) {
  cfg.validate();
  if (static_cast<std::size_t>(x0.size()) != p.dimension()) {
    throw DimensionError("initial_state: x0 has wrong dimension");
  }
  if (!all_finite(x0)) throw InvalidArgument("initial_state: x0 is not finite");
  GcesState s;
  s.k = 0;
  s.x = x0;
  s.v = x0;
  s.gamma = resolve_gamma0(cfg, p.mu_hat());
  s.L = cfg.L0;
  s.lambda = 1.0;
  return s;
}

void select_beta(GcesState& state, double mu_hat, MemoryPolicy policy) {
  for (auto& m : state.memory) m.beta_weight = 0.0;
  if (policy == MemoryPolicy::None || state.k < 2 || state.memory.empty()) return;
  MemoryTerm& last = state.memory.back();
  if (last.index + 1 != state.k || last.gamma <= 0.0) return;
  double beta = std::min(1.0, mu_hat / last.gamma);
  const double cap = std::min(state.gamma, mu_hat);
  if (beta * last.gamma > cap) beta = cap / last.gamma;
  last.beta_weight = std::clamp(beta, 0.0, 1.0);
}

double compute_sigma(const GcesState& state, double mu_hat) { return mu_hat + state.memory_weight(); }

double solve_alpha(double sigma, double gamma, double L) {
  if (!(L > 0.0)) throw InvalidArgument("solve_alpha: L must be positive");
  if (!(sigma >= 0.0) || !(gamma >= 0.0)) throw InvalidArgument("solve_alpha: negative sigma or gamma");
  if (sigma == 0.0 && gamma == 0.0) {
    throw DegenerateState("solve_alpha: sigma == gamma == 0, the method cannot advance");
  }
  const double d = sigma - gamma;
  const double disc = std::sqrt(d * d + 4.0 * L * gamma);
  // The two algebraically equal forms avoid cancellation for either sign of d.
  return d >= 0.0 ? (d + disc) / (2.0 * L) : (2.0 * gamma) / (disc - d);
}

DenseVector update_y(const DenseVector& x, const DenseVector& v, double gamma, double gamma_next,
                     double alpha, std::span<const MemoryTerm> memory) {
  require_same_size(x, v, "update_y");
  DenseVector num = gamma_next * x + (alpha * gamma) * v;
  double den = gamma_next + alpha * gamma;
  for (const auto& m : memory) {
    if (m.beta_weight == 0.0) continue;
    const double w = alpha * alpha * m.beta_weight * m.gamma;
    num += w * m.v;
    den += w;
  }
  if (!(den > 0.0)) throw DegenerateState("update_y: zero denominator");
  return num / den;
}

DenseVector update_v(const GcesState& state, double alpha, double gamma_next, const DenseVector& y,
                     const MappingResult& mapping, double mu_hat) {
  if (!(gamma_next > 0.0)) throw DegenerateState("update_v: gamma_{k+1} must be positive");
  DenseVector inner = mu_hat * y - mapping.reduced_grad;
  for (const auto& m : state.memory) {
    if (m.beta_weight != 0.0) inner += (m.beta_weight * m.gamma) * m.v;
  }
  return ((1.0 - alpha) * state.gamma * state.v + alpha * inner) / gamma_next;
}

TrialResult backtracking_step(const CompositeProblem& p, GcesState& state, const GcesConfig& cfg) {
  const double mu = p.mu_hat();
  const double sigma = compute_sigma(state, mu);
  const double memory_weight = state.memory_weight();
  const std::span<const MemoryTerm> memory(state.memory);
  const std::uint64_t prox_before = state.counters.prox_calls;

  double L_trial = cfg.eta_d * state.L;
  for (std::size_t trial = 1; trial <= kMaxLineSearchTrials; ++trial) {
    // alpha <= 1 needs sigma <= L; sigma can exceed a small estimate only
    // when the memory term is active on a very well conditioned problem.
    const double L_hat = std::max(L_trial, sigma);
    TrialResult t;
    t.L = L_hat;
    t.sigma = sigma;
    t.memory_weight = memory_weight;
    t.alpha = solve_alpha(sigma, state.gamma, L_hat);
    t.gamma_next = (1.0 - t.alpha) * state.gamma + t.alpha * sigma;
    t.y = update_y(state.x, state.v, state.gamma, t.gamma_next, t.alpha, memory);
    const SmoothPoint sy = evaluate_smooth(p, t.y, &state.counters);
    t.mapping = compute_mapping(p, L_hat, sy, &state.counters);
    t.x_next = t.mapping.t_point;
    t.v_next = update_v(state, t.alpha, t.gamma_next, t.y, t.mapping, mu);
    if (sufficient_decrease(t.mapping)) {
      if (!all_finite(t.x_next) || !all_finite(t.v_next)) {
        throw DegenerateState("backtracking_step: non-finite iterate at k = " +
                              std::to_string(state.k));
      }
      const double lhs = L_hat * t.alpha * t.alpha;
      const double rhs = (1.0 - t.alpha) * state.gamma + t.alpha * sigma;
      t.alpha_residual = std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-300});
      t.trials = trial;
      t.prox_calls = state.counters.prox_calls - prox_before;
      return t;
    }
    L_trial = cfg.eta_u * L_hat;
  }
  throw LineSearchFailure("backtracking_step: no sufficient decrease after " +
                          std::to_string(kMaxLineSearchTrials) + " trials at k = " +
                          std::to_string(state.k));
}

GcesState step(const CompositeProblem& p, GcesState state, const GcesConfig& cfg,
               IterationTrace* record) {
  select_beta(state, p.mu_hat(), cfg.memory_policy);
  TrialResult t = backtracking_step(p, state, cfg);

  if (cfg.memory_policy == MemoryPolicy::LastIterate) {
    state.memory.push_back(MemoryTerm{state.k, state.gamma, state.v, 0.0});
    while (state.memory.size() > cfg.memory_capacity) state.memory.erase(state.memory.begin());
  }
  for (auto& m : state.memory) m.beta_weight = 0.0;

  state.lambda *= 1.0 - t.alpha;
  state.L = t.L;
  state.x = std::move(t.x_next);
  state.v = std::move(t.v_next);
  state.gamma = t.gamma_next;
  ++state.k;

  if (record) {
    record->k = state.k;
    record->F = t.mapping.objective_at_t.total;
    record->L = state.L;
    record->alpha = t.alpha;
    record->gamma = state.gamma;
    record->lambda = state.lambda;
    record->grad_calls = state.counters.gradient_calls;
    record->prox_calls = state.counters.prox_calls;
    record->sigma = t.sigma;
    record->memory_weight = t.memory_weight;
    record->alpha_residual = t.alpha_residual;
    record->mapping_residual = t.mapping.reduced_grad.norm() / t.L;
    record->trials = t.trials;
    record->step_prox_calls = t.prox_calls;
  }
  return state;
}

SolveResult run_gces(const CompositeProblem& p, const GcesConfig& cfg, const DenseVector& x0,
                     const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  GcesState state = initial_state(p, cfg, x0);

  SolveResult out;
  out.solver = "gces";
  out.initial.x0 = x0;
  out.initial.F0 = evaluate(p, x0, &state.counters).total;
  out.initial.gamma0 = state.gamma;
  out.initial.L0 = cfg.L0;
  out.trace.reserve(cfg.max_iters);

  while (state.k < cfg.max_iters) {
    IterationTrace row;
    state = step(p, std::move(state), cfg, &row);
    annotate(row, state.x, options.reference);
    if (options.wall_clock) {
      row.sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    out.trace.push_back(row);
    if (row.mapping_residual <= cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.solution = state.x;
  out.counters = state.counters;
  return out;
}

}  // namespace gces
