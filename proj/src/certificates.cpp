#include "gces/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "gces/errors.hpp"

namespace gces {

DecayRegime decay_regime(double gamma0, double mu_hat, double L0) {
  if (gamma0 >= 0.0 && gamma0 < mu_hat) return DecayRegime::BelowMu;
  if (gamma0 > mu_hat && gamma0 >= 2.0 * mu_hat && gamma0 <= 3.0 * L0 + mu_hat) {
    return DecayRegime::AboveTwoMu;
  }
  return DecayRegime::NotChecked;
}

std::string to_string(DecayRegime r) {
  switch (r) {
    case DecayRegime::BelowMu:
      return "below_mu";
    case DecayRegime::AboveTwoMu:
      return "above_two_mu";
    case DecayRegime::NotChecked:
      return "not_checked";
  }
  return "unknown";
}

std::string to_string(LambdaScale s) {
  return s == LambdaScale::Current ? "current" : "running_max";
}

double CertificateReport::lambda_pass_rate() const {
  if (lambda_checked == 0) return 1.0;
  return 1.0 - static_cast<double>(scaled_lambda_violations()) / static_cast<double>(lambda_checked);
}

double CertificateReport::gap_pass_rate() const {
  if (rows.empty()) return 1.0;
  return 1.0 - static_cast<double>(gap_violations) / static_cast<double>(rows.size());
}

bool initial_gap_bound_holds(const CompositeProblem& p, double L, const DenseVector& x0,
                             const DenseVector& x_star, double f_star, double slack) {
  const double gap = evaluate(p, x0).total - f_star;
  return gap <= 0.5 * L * (x0 - x_star).squaredNorm() + slack;
}

CertificateReport certificate_check(const SolveResult& run, const CompositeProblem& p,
                                    const DenseVector& x_star, double f_star, LambdaScale scale) {
  require_same_size(run.initial.x0, x_star, "certificate_check");
  const double mu = p.mu_hat();
  const double gamma0 = run.initial.gamma0;
  if (std::isnan(gamma0)) throw InvalidArgument("certificate_check: run has no gamma0 (not a GCES run)");

  CertificateReport rep;
  rep.regime = decay_regime(gamma0, mu, run.initial.L0);
  rep.scale = scale;
  double L_max = 0.0;
  const double dist0_sq = (run.initial.x0 - x_star).squaredNorm();
  const double initial_gap = run.initial.F0 - f_star;
  rep.initial_gap = initial_gap;
  rep.initial_bound = 0.5 * p.lipschitz_hat() * dist0_sq;
  rep.initial_ok = initial_gap <= rep.initial_bound + kGapBoundSlack;
  const double budget = initial_gap + 0.5 * gamma0 * dist0_sq;

  auto check = [&](std::size_t k, double F, double lambda, double L_k) {
    CertificateRow row;
    row.k = k;
    row.gap = F - f_star;
    row.lambda = lambda;
    row.gap_bound = lambda * budget;
    row.gap_ok = row.gap <= row.gap_bound + kGapBoundSlack;
    const double kk = static_cast<double>(k + 1) * static_cast<double>(k + 1);
    L_max = std::max(L_max, L_k);
    switch (rep.regime) {
      case DecayRegime::BelowMu:
        row.lambda_checked = true;
        row.lambda_bound = 2.0 / kk;
        row.lambda_bound_running_max = row.lambda_bound;
        break;
      case DecayRegime::AboveTwoMu:
        row.lambda_checked = true;
        row.lambda_bound = 4.0 * L_k / ((gamma0 - mu) * kk);
        row.lambda_bound_running_max = 4.0 * L_max / ((gamma0 - mu) * kk);
        break;
      case DecayRegime::NotChecked:
        break;
    }
    if (row.lambda_checked) {
      row.lambda_ok = lambda <= row.lambda_bound * (1.0 + kLambdaBoundSlack);
      row.lambda_ok_running_max = lambda <= row.lambda_bound_running_max * (1.0 + kLambdaBoundSlack);
      if (!row.lambda_ok_running_max) ++rep.lambda_violations_running_max;
      ++rep.lambda_checked;
      if (!row.lambda_ok) {
        if (rep.lambda_violations == 0) rep.first_lambda_violation = k;
        ++rep.lambda_violations;
      }
    }
    if (!row.gap_ok) ++rep.gap_violations;
    rep.rows.push_back(row);
  };

  check(0, run.initial.F0, 1.0, run.initial.L0);
  for (const auto& r : run.trace) check(r.k, r.F, r.lambda, r.L);
  return rep;
}

}  // namespace gces
