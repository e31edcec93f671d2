#include "gces/problem.hpp"

#include <cmath>
#include <string>

#include "gces/errors.hpp"

namespace gces {

namespace {

void require_dimension(std::size_t expected, const DenseVector& x, const char* where) {
  if (static_cast<std::size_t>(x.size()) != expected) {
    throw DimensionError(std::string(where) + ": expected " + std::to_string(expected) +
                         " entries, got " + std::to_string(x.size()));
  }
}

}  // namespace

FunctionOracle::FunctionOracle(std::size_t dimension, ValueFn value, GradientFn gradient,
                               double lipschitz, double strong_convexity)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      lipschitz_(lipschitz),
      mu_(strong_convexity) {
  if (!(strong_convexity >= 0.0) || !(lipschitz >= strong_convexity)) {
    throw InvalidArgument("FunctionOracle: need lipschitz >= strong_convexity >= 0");
  }
}

double FunctionOracle::value(const DenseVector& x) const {
  require_dimension(dimension_, x, "FunctionOracle::value");
  return value_(x);
}

DenseVector FunctionOracle::gradient(const DenseVector& x) const {
  require_dimension(dimension_, x, "FunctionOracle::gradient");
  return gradient_(x);
}

ShiftedQuadraticOracle::ShiftedQuadraticOracle(std::shared_ptr<const SmoothOracle> base,
                                               double coeff, DenseVector anchor)
    : base_(std::move(base)), coeff_(coeff), anchor_(std::move(anchor)) {
  require_dimension(base_->dimension(), anchor_, "ShiftedQuadraticOracle");
}

double ShiftedQuadraticOracle::value(const DenseVector& x) const {
  return base_->value(x) + 0.5 * coeff_ * (x - anchor_).squaredNorm();
}

DenseVector ShiftedQuadraticOracle::gradient(const DenseVector& x) const {
  return base_->gradient(x) + coeff_ * (x - anchor_);
}

CompositeProblem apply_transfer(std::shared_ptr<const SmoothOracle> f, const ProxSpec& g, double tau,
                                const DenseVector& x0) {
  if (!f) throw InvalidArgument("apply_transfer: null smooth oracle");
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("apply_transfer: tau must be finite and >= 0");
  }
  const double mu_g = g.mu_g();
  if (!(mu_g >= 0.0)) throw InvalidArgument("apply_transfer: regularizer has mu_g < 0");
  require_dimension(f->dimension(), x0, "apply_transfer");

  CompositeProblem p;
  p.tau_ = tau;
  p.anchor_ = x0;
  p.original_mu_g_ = mu_g;
  if (mu_g == 0.0) {
    p.smooth_ = std::move(f);
    p.regularizer_ = g;
  } else {
    p.smooth_ = std::make_shared<ShiftedQuadraticOracle>(std::move(f), tau * mu_g, x0);
    p.regularizer_ = g.without_strong_convexity(x0);
  }
  p.lipschitz_hat_ = p.smooth_->lipschitz_hint();
  p.mu_hat_ = p.smooth_->strong_convexity();
  return p;
}

ObjectiveValue evaluate(const CompositeProblem& p, const DenseVector& x, OracleCounters* counters) {
  require_dimension(p.dimension(), x, "evaluate");
  ObjectiveValue out;
  out.smooth_part = p.smooth().value(x);
  out.nonsmooth_part = p.regularizer().value(x);
  out.total = out.smooth_part + p.tau() * out.nonsmooth_part;
  if (counters) ++counters->value_calls;
  return out;
}

DenseVector smooth_gradient(const CompositeProblem& p, const DenseVector& x,
                            OracleCounters* counters) {
  require_dimension(p.dimension(), x, "smooth_gradient");
  if (counters) ++counters->gradient_calls;
  return p.smooth().gradient(x);
}

}  // namespace gces
