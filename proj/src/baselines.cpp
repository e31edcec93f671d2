#include "gces/baselines.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "gces/errors.hpp"
#include "gces/solver_gces.hpp"

namespace gces {

namespace {

void check_common(double L0, double eta_u, const CompositeProblem& p, const DenseVector& x0,
                  const char* who) {
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument(std::string(who) + ": L0 must be positive");
  if (!(eta_u > 1.0)) throw InvalidArgument(std::string(who) + ": eta_u must be > 1");
  if (static_cast<std::size_t>(x0.size()) != p.dimension()) {
    throw DimensionError(std::string(who) + ": x0 has wrong dimension");
  }
  if (!all_finite(x0)) throw InvalidArgument(std::string(who) + ": x0 is not finite");
}

template <class State, class Config, class StepFn>
SolveResult drive(const char* name, const CompositeProblem& p, State state, const Config& cfg,
                  const DenseVector& x0, const RunOptions& options, StepFn step_fn) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult out;
  out.solver = name;
  out.initial.x0 = x0;
  out.initial.F0 = evaluate(p, x0, &state.counters).total;
  out.initial.L0 = cfg.L0;
  out.trace.reserve(cfg.max_iters);
  while (state.k < cfg.max_iters) {
    IterationTrace row;
    step_fn(state, row);
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

}  // namespace

double fista_next_t(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

FistaState fista_initial_state(const CompositeProblem& p, const FistaConfig& cfg,
                               const DenseVector& x0) {
  check_common(cfg.L0, cfg.eta_u, p, x0, "fista");
  FistaState s;
  s.x = x0;
  s.x_prev = x0;
  s.y = x0;
  s.t = 1.0;
  s.L = cfg.L0;
  return s;
}

void fista_step(const CompositeProblem& p, FistaState& s, const FistaConfig& cfg,
                IterationTrace* record) {
  const std::uint64_t prox_before = s.counters.prox_calls;
  const SmoothPoint sy = evaluate_smooth(p, s.y, &s.counters);
  std::size_t trial = 1;
  MappingResult m = compute_mapping(p, s.L, sy, &s.counters);
  while (!sufficient_decrease(m)) {
    if (++trial > kMaxLineSearchTrials) {
      throw LineSearchFailure("fista: no sufficient decrease after " +
                              std::to_string(kMaxLineSearchTrials) + " trials");
    }
    s.L *= cfg.eta_u;
    m = compute_mapping(p, s.L, sy, &s.counters);
  }
  const double t_next = fista_next_t(s.t);
  const double momentum = (s.t - 1.0) / t_next;
  s.x_prev = s.x;
  s.x = m.t_point;
  s.y = s.x + momentum * (s.x - s.x_prev);
  s.t = t_next;
  ++s.k;
  if (!all_finite(s.x)) throw DegenerateState("fista: non-finite iterate");
  if (record) {
    record->k = s.k;
    record->F = m.objective_at_t.total;
    record->L = s.L;
    record->grad_calls = s.counters.gradient_calls;
    record->prox_calls = s.counters.prox_calls;
    record->mapping_residual = m.reduced_grad.norm() / s.L;
    record->trials = trial;
    record->step_prox_calls = s.counters.prox_calls - prox_before;
  }
}

SolveResult fista_run(const CompositeProblem& p, const FistaConfig& cfg, const DenseVector& x0,
                      const RunOptions& options) {
  return drive("fista", p, fista_initial_state(p, cfg, x0), cfg, x0, options,
               [&](FistaState& s, IterationTrace& row) { fista_step(p, s, cfg, &row); });
}

AmgsState amgs_initial_state(const CompositeProblem& p, const AmgsConfig& cfg,
                             const DenseVector& x0) {
  check_common(cfg.L0, cfg.eta_u, p, x0, "amgs");
  if (!(cfg.eta_d > 0.0 && cfg.eta_d <= 1.0)) throw InvalidArgument("amgs: eta_d must lie in (0, 1]");
  AmgsState s;
  s.x = x0;
  s.v = x0;
  s.anchor = x0;
  s.gradient_sum = DenseVector::Zero(x0.size());
  s.A_coeff = 0.0;
  s.L = cfg.L0;
  return s;
}

void amgs_step(const CompositeProblem& p, AmgsState& s, const AmgsConfig& cfg,
               IterationTrace* record) {
  const std::uint64_t prox_before = s.counters.prox_calls;
  double M = s.L;
  std::size_t trial = 0;
  double a = 0.0;
  MappingResult m;
  DenseVector y;
  DenseVector grad_t;
  for (;;) {
    if (++trial > kMaxLineSearchTrials) {
      throw LineSearchFailure("amgs: line search failed after " +
                              std::to_string(kMaxLineSearchTrials) + " trials");
    }
    // a^2 / (A + a) = 2 / M
    a = 1.0 / M + std::sqrt(1.0 / (M * M) + 2.0 * s.A_coeff / M);
    y = (s.A_coeff * s.x + a * s.v) / (s.A_coeff + a);
    const SmoothPoint sy = evaluate_smooth(p, y, &s.counters);
    m = compute_mapping(p, M, sy, &s.counters);
    grad_t = smooth_gradient(p, m.t_point, &s.counters);
    // phi'(T) = M (y - T) + grad f(T) - grad f(y) is a subgradient of F at T.
    const DenseVector phi = m.reduced_grad + grad_t - sy.gradient;
    const DenseVector d = y - m.t_point;
    const double lhs = phi.dot(d);
    const double rhs = phi.squaredNorm() / M;
    if (lhs >= rhs - 1e-12 * (std::abs(lhs) + std::abs(rhs))) break;
    M *= cfg.eta_u;
  }
  s.x = m.t_point;
  s.A_coeff += a;
  s.gradient_sum += a * grad_t;
  const DenseVector dual_point = s.anchor - s.gradient_sum;
  if (p.tau() > 0.0) {
    s.v = prox(p.regularizer(), s.A_coeff * p.tau(), dual_point);
    ++s.counters.prox_calls;
  } else {
    s.v = dual_point;
  }
  s.L = cfg.eta_d * M;
  ++s.k;
  if (!all_finite(s.x) || !all_finite(s.v)) throw DegenerateState("amgs: non-finite iterate");
  if (record) {
    record->k = s.k;
    record->F = m.objective_at_t.total;
    record->L = M;
    record->grad_calls = s.counters.gradient_calls;
    record->prox_calls = s.counters.prox_calls;
    record->mapping_residual = m.reduced_grad.norm() / M;
    record->trials = trial;
    record->step_prox_calls = s.counters.prox_calls - prox_before;
  }
}

SolveResult amgs_run(const CompositeProblem& p, const AmgsConfig& cfg, const DenseVector& x0,
                     const RunOptions& options) {
  return drive("amgs", p, amgs_initial_state(p, cfg, x0), cfg, x0, options,
               [&](AmgsState& s, IterationTrace& row) { amgs_step(p, s, cfg, &row); });
}

}  // namespace gces
