#pragma once

#include <cstddef>

#include "gces/gradient_mapping.hpp"
#include "gces/problem.hpp"
#include "gces/trace.hpp"

namespace gces {

// FISTA with the monotone backtracking rule: the Lipschitz estimate is
// only ever multiplied by eta_u.

struct FistaConfig {
  double L0 = 1.0;
  double eta_u = 2.0;
  std::size_t max_iters = 1000;
  double tolerance = 1e-10;  // on ||y - T_L(y)||
};

struct FistaState {
  DenseVector x;       // x_k
  DenseVector x_prev;  // x_{k-1}
  DenseVector y;       // extrapolated point for the next step
  double t = 1.0;
  double L = 0.0;
  std::size_t k = 0;
  OracleCounters counters;
};

/// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
double fista_next_t(double t);

FistaState fista_initial_state(const CompositeProblem& p, const FistaConfig& cfg,
                               const DenseVector& x0);
void fista_step(const CompositeProblem& p, FistaState& state, const FistaConfig& cfg,
                IterationTrace* record = nullptr);
SolveResult fista_run(const CompositeProblem& p, const FistaConfig& cfg, const DenseVector& x0,
                      const RunOptions& options = {});

// Accelerated multistep gradient scheme for composite objectives: a primal
// gradient-mapping step at y plus a dual prox step producing v from the
// accumulated linear models, i.e. two prox evaluations per accepted step.

struct AmgsConfig {
  double L0 = 1.0;
  double eta_u = 2.0;
  double eta_d = 0.9;
  std::size_t max_iters = 1000;
  double tolerance = 1e-10;
};

struct AmgsState {
  DenseVector x;
  DenseVector v;
  DenseVector anchor;          // x_0, center of the dual prox term
  DenseVector gradient_sum;    // sum_i a_i grad f_hat(x_i)
  double A_coeff = 0.0;
  double L = 0.0;
  std::size_t k = 0;
  OracleCounters counters;
};

AmgsState amgs_initial_state(const CompositeProblem& p, const AmgsConfig& cfg,
                             const DenseVector& x0);
void amgs_step(const CompositeProblem& p, AmgsState& state, const AmgsConfig& cfg,
               IterationTrace* record = nullptr);
SolveResult amgs_run(const CompositeProblem& p, const AmgsConfig& cfg, const DenseVector& x0,
                     const RunOptions& options = {});

}  // namespace gces
