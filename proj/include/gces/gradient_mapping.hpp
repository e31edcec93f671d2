#pragma once

#include "gces/problem.hpp"

namespace gces {

/// f_hat and its gradient at a point, evaluated once and reused by every
/// model evaluation around that point.
struct SmoothPoint {
  DenseVector point;
  double value = 0.0;
  DenseVector gradient;
};

/// One value and one gradient oracle call.
SmoothPoint evaluate_smooth(const CompositeProblem& p, const DenseVector& y,
                            OracleCounters* counters = nullptr);

/// m_L(y; x) = f_hat(y) + <grad f_hat(y), x - y> + (L/2)||x - y||^2 + tau g_hat(x).
double model_value(const CompositeProblem& p, double L, const SmoothPoint& y, const DenseVector& x);
double model_value(const CompositeProblem& p, double L, const DenseVector& y, const DenseVector& x,
                   OracleCounters* counters = nullptr);

struct MappingResult {
  DenseVector t_point;       // T_L(y)
  DenseVector reduced_grad;  // r_L(y) = L (y - T_L(y))
  double model_at_t = 0.0;   // m_L(y; T_L(y))
  ObjectiveValue objective_at_t;
  double L_used = 0.0;
  /// f_hat(y) + <grad f_hat(y), T - y>, for the decrease test.
  double linearization_at_t = 0.0;
  double step_sq = 0.0;  // ||T - y||^2
  double value_at_y = 0.0;
};

/// T_L(y) = prox_{(tau/L) g_hat}(y - grad f_hat(y) / L). The tau weight of the
/// regularizer is absorbed into the prox step. One prox call and one value
/// call for F(T_L(y)); with tau == 0 the prox is skipped.
MappingResult compute_mapping(const CompositeProblem& p, double L, const SmoothPoint& y,
                              OracleCounters* counters = nullptr);
MappingResult compute_mapping(const CompositeProblem& p, double L, const DenseVector& y,
                              OracleCounters* counters = nullptr);

/// Relative slack admitted by the sufficient-decrease test.
inline constexpr double kDecreaseSlack = 1e-12;

/// F(candidate) <= m_L(y; candidate) + 1e-12 (1 + |F(candidate)|).
bool sufficient_decrease(double objective, double model);

/// Multiple of machine epsilon that bounds the rounding error of the
/// smooth-part comparison below.
inline constexpr double kRoundingSlack = 32.0;

/// F(T) <= m_L(y; T) evaluated on the smooth parts only, since the
/// regularizer terms cancel exactly:
///   f_hat(T) - f_hat(y) - <grad, T - y> <= (L/2)||T - y||^2 + slack,
/// where slack covers rounding in the values, not a modelling tolerance.
/// This keeps accepted steps from raising F by more than rounding noise.
bool sufficient_decrease(const MappingResult& m);
bool sufficient_decrease(const CompositeProblem& p, double L, const DenseVector& y,
                         const DenseVector& candidate, OracleCounters* counters = nullptr);

/// Right-hand side of the lower bound
///   F(x) >= F(T_L(y)) + <r_L(y), x - y> + (mu_hat/2)||x - y||^2 + ||r_L(y)||^2 / (2L),
/// valid whenever L >= L_hat. The caller owns that precondition.
double lower_bound_certificate(const CompositeProblem& p, double L, const DenseVector& y,
                               const DenseVector& x, OracleCounters* counters = nullptr);
double lower_bound_certificate(const CompositeProblem& p, const MappingResult& mapping,
                               const DenseVector& y, const DenseVector& x);

}  // namespace gces
