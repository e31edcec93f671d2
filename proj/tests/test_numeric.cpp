#include <gtest/gtest.h>

#include <random>

#include "gces/errors.hpp"
#include "gces/numeric.hpp"
#include "oracles.hpp"

using namespace gces;

namespace {

SparseMatrixCSR small() {
  // [1 0 2]
  // [0 0 0]
  // [0 3 4]
  return SparseMatrixCSR::from_triplets(3, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {2, 1, 3.0}, {2, 2, 4.0}});
}

}  // namespace

TEST(SparseMatrix, ValidatesStructure) {
  EXPECT_THROW(SparseMatrixCSR(2, 2, {0, 1}, {0}, {1.0}), InvalidArgument);
  EXPECT_THROW(SparseMatrixCSR(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(SparseMatrixCSR(1, 2, {0, 1}, {2}, {1.0}), InvalidArgument);
  EXPECT_THROW(SparseMatrixCSR(1, 2, {0, 2}, {0, 1}, {1.0}), InvalidArgument);
  EXPECT_NO_THROW(SparseMatrixCSR(2, 2, {0, 0, 1}, {1}, {1.0}));
}

TEST(SparseMatrix, TripletsSumDuplicates) {
  const auto a = SparseMatrixCSR::from_triplets(2, 2, {{1, 1, 1.0}, {0, 0, 2.0}, {1, 1, 0.5}});
  EXPECT_EQ(a.nnz(), 2u);
  const DenseMatrix d = a.to_dense();
  EXPECT_DOUBLE_EQ(d(1, 1), 1.5);
  EXPECT_DOUBLE_EQ(d(0, 0), 2.0);
}

TEST(SparseMatrix, ProductsMatchDense) {
  DenseMatrix dense = DenseMatrix::Zero(5, 4);
  dense(0, 1) = 1.5;
  dense(2, 0) = -2.0;
  dense(2, 3) = 0.25;
  dense(4, 2) = 7.0;
  const auto a = SparseMatrixCSR::from_dense(dense);
  const DenseVector x = oracle::gaussian_vector(4, 1);
  const DenseVector y = oracle::gaussian_vector(5, 2);
  EXPECT_LT((spmv(a, x) - dense * x).norm(), 1e-14);
  EXPECT_LT((spmv_transpose(a, y) - dense.transpose() * y).norm(), 1e-14);
  EXPECT_THROW(spmv(a, y), DimensionError);
}

TEST(SparseMatrix, Truncation) {
  const auto t = small().truncated(2, 2);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_EQ(t.nnz(), 1u);
  EXPECT_DOUBLE_EQ(t.to_dense()(0, 0), 1.0);
  const auto all = small().truncated(0, 0);
  EXPECT_EQ(all.nnz(), 4u);
}

TEST(SparseMatrix, RowAccess) {
  const auto a = small();
  EXPECT_EQ(a.row_indices(1).size(), 0u);
  ASSERT_EQ(a.row_indices(2).size(), 2u);
  EXPECT_EQ(a.row_indices(2)[0], 1u);
  EXPECT_DOUBLE_EQ(a.row_values(2)[1], 4.0);
}

TEST(SpectralNorm, MatchesDenseEigenvalue) {
  DenseMatrix dense(6, 4);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < dense.rows(); ++i)
    for (Eigen::Index j = 0; j < dense.cols(); ++j) dense(i, j) = u(gen);
  const auto a = SparseMatrixCSR::from_dense(dense);
  const SpectralEstimate est = spectral_norm_sq(a);
  EXPECT_TRUE(est.converged);
  EXPECT_NEAR(est.value, oracle::dense_lambda_max(dense), 1e-9 * est.value);
}

TEST(SpectralNorm, DiagonalIsExactAndDeterministic) {
  const std::vector<double> d{1.0, 0.1, 0.01, 0.5};
  const auto a = SparseMatrixCSR::diagonal(d);
  const auto e1 = spectral_norm_sq(a);
  const auto e2 = spectral_norm_sq(a);
  EXPECT_NEAR(e1.value, 1.0, 1e-12);
  EXPECT_EQ(e1.value, e2.value);
  EXPECT_EQ(e1.iterations, e2.iterations);
}

TEST(SpectralNorm, RejectsEmpty) {
  EXPECT_THROW(spectral_norm_sq(SparseMatrixCSR()), InvalidArgument);
}

TEST(Numeric, HelpersCheckSizes) {
  DenseVector a(2), b(3);
  a << 1, 2;
  b << 1, 2, 3;
  EXPECT_THROW(dot(a, b), DimensionError);
  EXPECT_DOUBLE_EQ(dot(a, a), 5.0);
  DenseVector bad(1);
  bad << std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(all_finite(bad));
}
