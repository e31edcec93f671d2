#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "gces/numeric.hpp"
#include "gces/problem.hpp"
#include "gces/prox.hpp"

namespace gces {

struct LabeledDataset;

/// Diagonal ill-conditioned quadratic: diagonal entries drawn uniformly from
/// {10^0, ..., 10^-xi}, targets uniform on [0, 1].
struct SyntheticSpec {
  std::size_t m = 500;
  int xi = 3;
  std::uint64_t seed = 0;
  double tau1 = 1e-3;
  double tau2 = 1e-3;
};

/// 0.5 ||A x - b||^2 + (tau1/2) ||x||^2 + tau2 ||x||_1.
struct QuadraticElasticNet {
  SparseMatrixCSR A;
  DenseVector b;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double loss_lipschitz = 0.0;  // lambda_max(A^T A)
  /// lambda_min(A^T A) when known (synthetic diagonal), 0 otherwise.
  double loss_strong_convexity = 0.0;
  /// Ratio of the largest to smallest |A| entry (10^xi for the synthetic
  /// generator). The curvature ratio of the loss is the square of this.
  std::optional<double> entry_condition;

  double L_f() const { return loss_lipschitz + tau1; }
  double mu_f() const { return loss_strong_convexity + tau1; }
};

/// (1/m) sum_i log(1 + exp(-b_i <a_i, x>)) + (tau1/2)||x||^2 + tau2 ||x||_1.
struct LogisticElasticNet {
  SparseMatrixCSR A;
  DenseVector b;  // labels in {-1, +1}
  double tau1 = 0.0;
  double tau2 = 0.0;
  double loss_lipschitz = 0.0;  // lambda_max(A^T A) / (4 m)

  std::size_t m() const { return A.rows(); }
  double L_f() const { return loss_lipschitz + tau1; }
  double mu_f() const { return tau1; }
};

/// Smooth part, regularizer and weight for the composite problem. The l2
/// term of the elastic net lives in the smooth part, so g = ||.||_1 with
/// mu_g = 0 and tau = tau2.
struct ZooProblem {
  std::shared_ptr<const SmoothOracle> smooth;
  ProxSpec regularizer = ProxSpec::zero();
  double tau = 0.0;
};

class QuadraticLossOracle final : public SmoothOracle {
 public:
  explicit QuadraticLossOracle(QuadraticElasticNet q);
  std::size_t dimension() const override { return q_.A.cols(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  double lipschitz_hint() const override { return q_.L_f(); }
  double strong_convexity() const override { return q_.mu_f(); }
  const QuadraticElasticNet& instance() const { return q_; }

 private:
  QuadraticElasticNet q_;
};

class LogisticLossOracle final : public SmoothOracle {
 public:
  explicit LogisticLossOracle(LogisticElasticNet l);
  std::size_t dimension() const override { return l_.A.cols(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  double lipschitz_hint() const override { return l_.L_f(); }
  double strong_convexity() const override { return l_.mu_f(); }
  const LogisticElasticNet& instance() const { return l_; }

 private:
  LogisticElasticNet l_;
};

/// log(1 + exp(z)) without overflow.
double softplus(double z);
/// 1 / (1 + exp(-z)) without overflow.
double sigmoid(double z);

/// The two pinned entries d_0 = 1 and d_1 = 10^-xi make L and mu of the loss
/// deterministic; the rest are sampled. Deterministic per seed.
QuadraticElasticNet make_synthetic(const SyntheticSpec& spec);

struct SyntheticLogisticSpec {
  std::size_t rows = 200;
  std::size_t cols = 100;
  double density = 0.1;
  std::uint64_t seed = 0;
  double tau1 = 1e-4;
  double tau2 = 1e-4;
};

/// Sparse Gaussian features with unit-norm rows, labels from a random
/// hyperplane with 10% flips.
LogisticElasticNet make_synthetic_logistic(const SyntheticLogisticSpec& spec);

QuadraticElasticNet quadratic_from_dataset(const LabeledDataset& ds, double tau1, double tau2);
/// Labels must be +-1 (remap {0,1} at parse time).
LogisticElasticNet logistic_from_dataset(const LabeledDataset& ds, double tau1, double tau2);

ZooProblem quadratic_oracle(QuadraticElasticNet q);
ZooProblem logistic_oracle(LogisticElasticNet l);

}  // namespace gces
