#include <gtest/gtest.h>

#include <random>

#include "gces/errors.hpp"
#include "gces/prox.hpp"
#include "oracles.hpp"

using namespace gces;

namespace {

DenseVector vec(std::initializer_list<double> v) {
  DenseVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

std::vector<ProxSpec> all_kinds(std::size_t n) {
  return {ProxSpec::zero(), ProxSpec::l1(),
          ProxSpec::squared_l2_shifted(oracle::gaussian_vector(n, 99), 0.7),
          ProxSpec::elastic_net(0.3),
          ProxSpec::squared_l2_shifted(oracle::gaussian_vector(n, 98), 2.0)
              .without_strong_convexity(oracle::gaussian_vector(n, 97)),
          ProxSpec::elastic_net(0.6).without_strong_convexity(oracle::gaussian_vector(n, 96))};
}

}  // namespace

TEST(Prox, ZeroIsIdentity) {
  const DenseVector x = vec({1.0, -2.0, 3.5});
  EXPECT_EQ(prox(ProxSpec::zero(), 0.7, x), x);
}

TEST(Prox, L1SoftThreshold) {
  const DenseVector z = prox(ProxSpec::l1(), 1.0, vec({3.0, -0.5, 1.0}));
  EXPECT_EQ(z, vec({2.0, 0.0, 0.0}));
}

TEST(Prox, TiesMapToZero) {
  EXPECT_EQ(soft_threshold(1.0, 1.0), 0.0);
  EXPECT_EQ(soft_threshold(-1.0, 1.0), 0.0);
  EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
}

TEST(Prox, SquaredL2Shifted) {
  const DenseVector z = prox(ProxSpec::squared_l2_shifted(DenseVector::Zero(2), 1.0), 1.0, vec({2.0, 4.0}));
  EXPECT_NEAR((z - vec({1.0, 2.0})).norm(), 0.0, 1e-15);
}

TEST(Prox, RejectsNonPositiveStep) {
  EXPECT_THROW(prox(ProxSpec::l1(), 0.0, vec({1.0})), InvalidArgument);
  EXPECT_THROW(prox(ProxSpec::l1(), -1.0, vec({1.0})), InvalidArgument);
}

TEST(Prox, StrongConvexityByKind) {
  EXPECT_EQ(ProxSpec::zero().mu_g(), 0.0);
  EXPECT_EQ(ProxSpec::l1().mu_g(), 0.0);
  EXPECT_EQ(ProxSpec::squared_l2_shifted(DenseVector::Zero(1), 3.0).mu_g(), 3.0);
  EXPECT_DOUBLE_EQ(ProxSpec::elastic_net(0.25).mu_g(), 0.75);
  EXPECT_THROW(ProxSpec::elastic_net(1.5), InvalidArgument);
  EXPECT_THROW(ProxSpec::squared_l2_shifted(DenseVector::Zero(1), -1.0), InvalidArgument);
}

TEST(Prox, MatchesBruteForceOnRandomInputs) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ut(0.05, 3.0);
  constexpr std::size_t n = 6;
  for (const ProxSpec& g : all_kinds(n)) {
    for (int trial = 0; trial < 100; ++trial) {
      const double t = ut(gen);
      const DenseVector x = oracle::gaussian_vector(n, 1000 + trial, 2.0);
      const DenseVector z = prox(g, t, x);
      const DenseVector ref = oracle::brute_force_prox(g, t, x);
      EXPECT_LT((z - ref).lpNorm<Eigen::Infinity>(), 1e-5) << to_string(g.kind()) << " trial " << trial;
    }
  }
}

TEST(Prox, OptimalityConditionHolds) {
  // (x - z) / t must lie in the subdifferential of g at z = prox(x).
  constexpr std::size_t n = 5;
  for (const ProxSpec& g : all_kinds(n)) {
    for (int trial = 0; trial < 50; ++trial) {
      const double t = 0.1 + 0.05 * trial;
      const DenseVector x = oracle::gaussian_vector(n, 500 + trial, 1.5);
      const DenseVector z = prox(g, t, x);
      EXPECT_TRUE(subdifferential_check(g, z, (x - z) / t, 1e-9)) << to_string(g.kind());
    }
  }
}

TEST(Prox, SubdifferentialExamples) {
  EXPECT_TRUE(subdifferential_check(ProxSpec::l1(), vec({2.0, 0.0}), vec({1.0, 0.3})));
  EXPECT_FALSE(subdifferential_check(ProxSpec::l1(), vec({2.0, 0.0}), vec({0.5, 0.0})));
  EXPECT_TRUE(subdifferential_check(ProxSpec::zero(), vec({1.0, -4.0}), vec({0.0, 0.0})));
  EXPECT_FALSE(subdifferential_check(ProxSpec::zero(), vec({1.0}), vec({0.1})));
}

TEST(Prox, TransferKeepsValuesUpToQuadratic) {
  const DenseVector c = oracle::gaussian_vector(4, 1);
  const DenseVector x0 = oracle::gaussian_vector(4, 2);
  const ProxSpec g = ProxSpec::squared_l2_shifted(c, 1.3);
  const ProxSpec h = g.without_strong_convexity(x0);
  EXPECT_EQ(h.mu_g(), 0.0);
  EXPECT_TRUE(h.transferred());
  for (int i = 0; i < 10; ++i) {
    const DenseVector z = oracle::gaussian_vector(4, 10 + i);
    EXPECT_NEAR(h.value(z), g.value(z) - 0.65 * (z - x0).squaredNorm(), 1e-12);
  }
}

TEST(Prox, DimensionChecked) {
  const ProxSpec g = ProxSpec::squared_l2_shifted(DenseVector::Zero(3), 1.0);
  EXPECT_THROW(prox(g, 1.0, vec({1.0})), DimensionError);
}
