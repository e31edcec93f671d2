#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gces/problem.hpp"
#include "gces/trace.hpp"

namespace gces {

/// Which lambda-decay bound applies for a given gamma_0.
enum class DecayRegime {
  BelowMu,       // gamma_0 in [0, mu):      lambda_k <= 2 / (k+1)^2
  AboveTwoMu,    // gamma_0 in [2mu, 3L0+mu]: lambda_k <= 4 L_k / ((gamma_0 - mu)(k+1)^2)
  NotChecked,    // gamma_0 == mu (regime boundary) or outside both ranges
};

DecayRegime decay_regime(double gamma0, double mu_hat, double L0);
std::string to_string(DecayRegime r);

/// Which L enters the second lambda bound: the estimate L_k of the same
/// iteration, or max_{j <= k} L_j. The running maximum is what the decay
/// argument actually needs when the line search lowers L between iterations.
enum class LambdaScale { Current, RunningMax };

/// Absolute slack on the gap bound.
inline constexpr double kGapBoundSlack = 1e-9;
/// Relative slack on the lambda bounds (rounding in the product of (1 - alpha)).
inline constexpr double kLambdaBoundSlack = 1e-12;

struct CertificateRow {
  std::size_t k = 0;
  double gap = 0.0;
  double gap_bound = 0.0;  // lambda_k (F(x0) - F* + gamma0/2 ||x0 - x*||^2)
  bool gap_ok = true;
  double lambda = 1.0;
  double lambda_bound = 0.0;
  bool lambda_checked = false;
  bool lambda_ok = true;
  double lambda_bound_running_max = 0.0;
  bool lambda_ok_running_max = true;
};

struct CertificateReport {
  DecayRegime regime = DecayRegime::NotChecked;
  // F(x0) - F* <= (L_hat / 2) ||x0 - x*||^2
  double initial_gap = 0.0;
  double initial_bound = 0.0;
  bool initial_ok = true;
  std::vector<CertificateRow> rows;  // k = 0 first
  std::size_t gap_violations = 0;
  std::size_t lambda_checked = 0;
  std::size_t lambda_violations = 0;
  std::size_t first_lambda_violation = 0;  // valid when lambda_violations > 0
  std::size_t lambda_violations_running_max = 0;
  /// Decides which of the two violation counts passed() looks at.
  LambdaScale scale = LambdaScale::Current;

  double lambda_pass_rate() const;
  double gap_pass_rate() const;
  std::size_t scaled_lambda_violations() const {
    return scale == LambdaScale::Current ? lambda_violations : lambda_violations_running_max;
  }
  bool passed() const { return initial_ok && gap_violations == 0 && scaled_lambda_violations() == 0; }
};

/// Evaluates the gap bound, the lambda-decay bound and the initial-gap
/// bound along a GCES trace. The gap bound omits the nonnegative memory
/// term, which makes it weaker and still valid.
CertificateReport certificate_check(const SolveResult& run, const CompositeProblem& p,
                                    const DenseVector& x_star, double f_star,
                                    LambdaScale scale = LambdaScale::Current);
std::string to_string(LambdaScale s);

/// F(x0) - F* <= (L / 2) ||x0 - x*||^2 with F evaluated on p.
bool initial_gap_bound_holds(const CompositeProblem& p, double L, const DenseVector& x0,
                             const DenseVector& x_star, double f_star, double slack = kGapBoundSlack);

}  // namespace gces
