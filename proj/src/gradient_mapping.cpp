#include "gces/gradient_mapping.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gces/errors.hpp"

namespace gces {

namespace {

void require_positive_step(double L, const char* where) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw InvalidArgument(std::string(where) + ": L must be positive and finite");
  }
}

}  // namespace

SmoothPoint evaluate_smooth(const CompositeProblem& p, const DenseVector& y,
                            OracleCounters* counters) {
  SmoothPoint sp;
  sp.point = y;
  sp.gradient = smooth_gradient(p, y, counters);
  sp.value = p.smooth().value(y);
  if (counters) ++counters->value_calls;
  return sp;
}

double model_value(const CompositeProblem& p, double L, const SmoothPoint& y, const DenseVector& x) {
  require_positive_step(L, "model_value");
  require_same_size(y.point, x, "model_value");
  const DenseVector d = x - y.point;
  return y.value + y.gradient.dot(d) + 0.5 * L * d.squaredNorm() +
         p.tau() * p.regularizer().value(x);
}

double model_value(const CompositeProblem& p, double L, const DenseVector& y, const DenseVector& x,
                   OracleCounters* counters) {
  require_positive_step(L, "model_value");
  return model_value(p, L, evaluate_smooth(p, y, counters), x);
}

MappingResult compute_mapping(const CompositeProblem& p, double L, const SmoothPoint& y,
                              OracleCounters* counters) {
  require_positive_step(L, "compute_mapping");
  MappingResult out;
  out.L_used = L;
  const DenseVector step = y.point - y.gradient / L;
  if (p.tau() > 0.0) {
    out.t_point = prox(p.regularizer(), p.tau() / L, step);
    if (counters) ++counters->prox_calls;
  } else {
    out.t_point = step;
  }
  out.reduced_grad = L * (y.point - out.t_point);
  out.model_at_t = model_value(p, L, y, out.t_point);
  out.objective_at_t = evaluate(p, out.t_point, counters);
  const DenseVector d = out.t_point - y.point;
  out.linearization_at_t = y.value + y.gradient.dot(d);
  out.step_sq = d.squaredNorm();
  out.value_at_y = y.value;
  return out;
}

MappingResult compute_mapping(const CompositeProblem& p, double L, const DenseVector& y,
                              OracleCounters* counters) {
  require_positive_step(L, "compute_mapping");
  return compute_mapping(p, L, evaluate_smooth(p, y, counters), counters);
}

bool sufficient_decrease(double objective, double model) {
  return objective <= model + kDecreaseSlack * (1.0 + std::abs(objective));
}

bool sufficient_decrease(const MappingResult& m) {
  const double excess = m.objective_at_t.smooth_part - m.linearization_at_t;
  const double scale = std::abs(m.objective_at_t.smooth_part) + std::abs(m.value_at_y) +
                       std::abs(m.linearization_at_t - m.value_at_y);
  const double slack = kRoundingSlack * std::numeric_limits<double>::epsilon() * scale;
  return excess <= 0.5 * m.L_used * m.step_sq + slack;
}

bool sufficient_decrease(const CompositeProblem& p, double L, const DenseVector& y,
                         const DenseVector& candidate, OracleCounters* counters) {
  const SmoothPoint sp = evaluate_smooth(p, y, counters);
  const double model = model_value(p, L, sp, candidate);
  return sufficient_decrease(evaluate(p, candidate, counters).total, model);
}

double lower_bound_certificate(const CompositeProblem& p, const MappingResult& mapping,
                               const DenseVector& y, const DenseVector& x) {
  require_same_size(y, x, "lower_bound_certificate");
  const DenseVector d = x - y;
  const DenseVector& r = mapping.reduced_grad;
  return mapping.objective_at_t.total + r.dot(d) + 0.5 * p.mu_hat() * d.squaredNorm() +
         r.squaredNorm() / (2.0 * mapping.L_used);
}

double lower_bound_certificate(const CompositeProblem& p, double L, const DenseVector& y,
                               const DenseVector& x, OracleCounters* counters) {
  return lower_bound_certificate(p, compute_mapping(p, L, y, counters), y, x);
}

}  // namespace gces
