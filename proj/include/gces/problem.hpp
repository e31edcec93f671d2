#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>

#include "gces/numeric.hpp"
#include "gces/prox.hpp"

namespace gces {

/// Per-run oracle tallies. Owned by one solver run, never shared.
struct OracleCounters {
  std::uint64_t value_calls = 0;
  std::uint64_t gradient_calls = 0;
  std::uint64_t prox_calls = 0;
};

/// Smooth convex part f: value, gradient and curvature metadata.
/// Implementations must be safe to call concurrently through const methods.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual std::size_t dimension() const = 0;
  virtual double value(const DenseVector& x) const = 0;
  virtual DenseVector gradient(const DenseVector& x) const = 0;
  /// L_f or an upper bound on it.
  virtual double lipschitz_hint() const = 0;
  /// mu_f >= 0 (a lower bound is acceptable).
  virtual double strong_convexity() const = 0;
};

/// Oracle backed by callables; used by tests and the Python bindings.
class FunctionOracle final : public SmoothOracle {
 public:
  using ValueFn = std::function<double(const DenseVector&)>;
  using GradientFn = std::function<DenseVector(const DenseVector&)>;

  FunctionOracle(std::size_t dimension, ValueFn value, GradientFn gradient, double lipschitz,
                 double strong_convexity);

  std::size_t dimension() const override { return dimension_; }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  double lipschitz_hint() const override { return lipschitz_; }
  double strong_convexity() const override { return mu_; }

 private:
  std::size_t dimension_;
  ValueFn value_;
  GradientFn gradient_;
  double lipschitz_;
  double mu_;
};

/// f(x) + (coeff / 2) ||x - anchor||^2.
class ShiftedQuadraticOracle final : public SmoothOracle {
 public:
  ShiftedQuadraticOracle(std::shared_ptr<const SmoothOracle> base, double coeff, DenseVector anchor);

  std::size_t dimension() const override { return base_->dimension(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  double lipschitz_hint() const override { return base_->lipschitz_hint() + coeff_; }
  double strong_convexity() const override { return base_->strong_convexity() + coeff_; }

 private:
  std::shared_ptr<const SmoothOracle> base_;
  double coeff_;
  DenseVector anchor_;
};

/// F = f_hat + tau * g_hat after the strong-convexity transfer; g_hat has
/// mu = 0. Immutable once built.
class CompositeProblem {
 public:
  std::size_t dimension() const { return smooth_->dimension(); }
  const SmoothOracle& smooth() const { return *smooth_; }
  std::shared_ptr<const SmoothOracle> smooth_ptr() const { return smooth_; }
  const ProxSpec& regularizer() const { return regularizer_; }
  double tau() const { return tau_; }
  double mu_hat() const { return mu_hat_; }
  double lipschitz_hat() const { return lipschitz_hat_; }
  const DenseVector& anchor() const { return anchor_; }
  /// mu_g of the regularizer before the transfer.
  double original_mu_g() const { return original_mu_g_; }

 private:
  CompositeProblem() = default;
  friend CompositeProblem apply_transfer(std::shared_ptr<const SmoothOracle>, const ProxSpec&,
                                         double, const DenseVector&);

  std::shared_ptr<const SmoothOracle> smooth_;
  ProxSpec regularizer_ = ProxSpec::zero();
  double tau_ = 0.0;
  double mu_hat_ = 0.0;
  double lipschitz_hat_ = 0.0;
  double original_mu_g_ = 0.0;
  DenseVector anchor_;
};

/// Moves the strong convexity of g into the smooth part around x0:
///   f_hat = f + (tau mu_g / 2) ||x - x0||^2,  g_hat = g - (mu_g / 2) ||x - x0||^2.
/// tau == 0 is accepted and yields the purely smooth problem.
CompositeProblem apply_transfer(std::shared_ptr<const SmoothOracle> f, const ProxSpec& g, double tau,
                                const DenseVector& x0);

struct ObjectiveValue {
  double total = 0.0;           // F
  double smooth_part = 0.0;     // f_hat
  double nonsmooth_part = 0.0;  // g_hat
};

/// Exact decomposition of F at x; one value-oracle call.
ObjectiveValue evaluate(const CompositeProblem& p, const DenseVector& x,
                        OracleCounters* counters = nullptr);

/// Gradient of f_hat at x; one gradient-oracle call.
DenseVector smooth_gradient(const CompositeProblem& p, const DenseVector& x,
                            OracleCounters* counters = nullptr);

}  // namespace gces
