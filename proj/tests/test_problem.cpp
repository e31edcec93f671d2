#include <gtest/gtest.h>

#include "gces/errors.hpp"
#include "gces/problem.hpp"
#include "oracles.hpp"

using namespace gces;

namespace {

std::shared_ptr<const SmoothOracle> half_sq(std::size_t n) {
  return std::make_shared<FunctionOracle>(
      n, [](const DenseVector& x) { return 0.5 * x.squaredNorm(); },
      [](const DenseVector& x) { return DenseVector(x); }, 1.0, 1.0);
}

}  // namespace

TEST(Transfer, IdentityWhenRegularizerIsNotStronglyConvex) {
  const DenseVector x0 = oracle::gaussian_vector(3, 1);
  const auto p = apply_transfer(half_sq(3), ProxSpec::l1(), 0.5, x0);
  EXPECT_EQ(p.mu_hat(), 1.0);
  EXPECT_EQ(p.lipschitz_hat(), 1.0);
  EXPECT_EQ(p.regularizer().kind(), ProxKind::L1);
  EXPECT_FALSE(p.regularizer().transferred());
}

TEST(Transfer, MovesCurvatureIntoSmoothPart) {
  const DenseVector x0 = DenseVector::Zero(2);
  const auto g = ProxSpec::squared_l2_shifted(DenseVector::Zero(2), 1.0);
  const auto p = apply_transfer(half_sq(2), g, 2.0, x0);
  EXPECT_DOUBLE_EQ(p.lipschitz_hat(), 3.0);
  EXPECT_DOUBLE_EQ(p.mu_hat(), 3.0);
  EXPECT_EQ(p.regularizer().mu_g(), 0.0);
  EXPECT_EQ(p.original_mu_g(), 1.0);
}

TEST(Transfer, PreservesObjective) {
  const std::size_t n = 5;
  const DenseVector x0 = oracle::gaussian_vector(n, 3);
  const DenseVector c = oracle::gaussian_vector(n, 4);
  for (const ProxSpec& g : {ProxSpec::squared_l2_shifted(c, 0.8), ProxSpec::elastic_net(0.4)}) {
    const double tau = 1.7;
    const auto p = apply_transfer(half_sq(n), g, tau, x0);
    for (int i = 0; i < 20; ++i) {
      const DenseVector x = oracle::gaussian_vector(n, 100 + i, 3.0);
      const double before = 0.5 * x.squaredNorm() + tau * g.value(x);
      const double after = evaluate(p, x).total;
      EXPECT_LE(std::abs(before - after), 1e-10 * (1.0 + std::abs(before)));
    }
  }
}

TEST(Transfer, RejectsBadInput) {
  const DenseVector x0 = DenseVector::Zero(2);
  EXPECT_THROW(apply_transfer(half_sq(2), ProxSpec::l1(), -1.0, x0), InvalidArgument);
  EXPECT_THROW(apply_transfer(nullptr, ProxSpec::l1(), 1.0, x0), InvalidArgument);
  EXPECT_THROW(apply_transfer(half_sq(3), ProxSpec::l1(), 1.0, x0), DimensionError);
}

TEST(Transfer, ZeroTauIsSmooth) {
  const auto p = apply_transfer(half_sq(2), ProxSpec::l1(), 0.0, DenseVector::Zero(2));
  DenseVector x(2);
  x << 1.0, -2.0;
  EXPECT_DOUBLE_EQ(evaluate(p, x).total, 2.5);
}

TEST(Evaluate, HandComputedValue) {
  const auto p = apply_transfer(half_sq(2), ProxSpec::l1(), 1.0, DenseVector::Zero(2));
  DenseVector x(2);
  x << 1.0, -2.0;
  OracleCounters c;
  const ObjectiveValue v = evaluate(p, x, &c);
  EXPECT_DOUBLE_EQ(v.smooth_part, 2.5);
  EXPECT_DOUBLE_EQ(v.nonsmooth_part, 3.0);
  EXPECT_DOUBLE_EQ(v.total, 5.5);
  EXPECT_EQ(c.value_calls, 1u);
  EXPECT_DOUBLE_EQ(evaluate(p, DenseVector::Zero(2)).total, 0.0);
}

TEST(Evaluate, TotalIsSumOfParts) {
  const auto p = apply_transfer(half_sq(4), ProxSpec::elastic_net(0.5), 0.3, oracle::gaussian_vector(4, 8));
  for (int i = 0; i < 10; ++i) {
    const ObjectiveValue v = evaluate(p, oracle::gaussian_vector(4, 20 + i));
    EXPECT_NEAR(v.total, v.smooth_part + p.tau() * v.nonsmooth_part, 1e-12 * (1 + std::abs(v.total)));
  }
}

TEST(Gradients, ShiftedOracleMatchesFiniteDifferences) {
  const std::size_t n = 4;
  const DenseVector anchor = oracle::gaussian_vector(n, 5);
  ShiftedQuadraticOracle s(half_sq(n), 0.6, anchor);
  for (int i = 0; i < 20; ++i) {
    const DenseVector x = oracle::gaussian_vector(n, 60 + i);
    const DenseVector fd = oracle::finite_difference_gradient([&](const DenseVector& z) { return s.value(z); }, x);
    EXPECT_LT(oracle::gradient_relative_error(s.gradient(x), fd), 1e-5);
  }
  EXPECT_DOUBLE_EQ(s.lipschitz_hint(), 1.6);
}
