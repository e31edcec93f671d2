#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gces {

/// Dense iterate storage (x, y, v).
using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

double dot(const DenseVector& a, const DenseVector& b);

/// alpha * x + beta * y.
DenseVector axpby(double alpha, const DenseVector& x, double beta, const DenseVector& y);

/// Throws DimensionError unless both vectors have the same length.
void require_same_size(const DenseVector& a, const DenseVector& b, const char* where);

bool all_finite(const DenseVector& x);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-sparse-row matrix. Validated on construction:
///  - row_offsets has n_rows + 1 non-decreasing entries starting at 0,
///  - row_offsets.back() == col_indices.size() == values.size(),
///  - column indices are < n_cols and strictly increasing within a row.
class SparseMatrixCSR {
 public:
  SparseMatrixCSR();
  SparseMatrixCSR(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
                  std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Duplicate (row, col) entries are summed.
  static SparseMatrixCSR from_triplets(std::size_t n_rows, std::size_t n_cols,
                                       std::vector<Triplet> triplets);
  static SparseMatrixCSR diagonal(std::span<const double> entries);
  static SparseMatrixCSR identity(std::size_t n);
  static SparseMatrixCSR from_dense(const DenseMatrix& dense);

  std::size_t rows() const noexcept { return n_rows_; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_indices(std::size_t row) const;
  std::span<const double> row_values(std::size_t row) const;

  /// Keeps the leading max_rows rows and drops columns >= max_cols.
  /// A limit of 0 means "no limit".
  SparseMatrixCSR truncated(std::size_t max_rows, std::size_t max_cols) const;

  DenseMatrix to_dense() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// A x. x must have A.cols() entries.
DenseVector spmv(const SparseMatrixCSR& a, const DenseVector& x);
/// A^T x. x must have A.rows() entries.
DenseVector spmv_transpose(const SparseMatrixCSR& a, const DenseVector& x);

struct SpectralEstimate {
  double value = 0.0;       // estimate of lambda_max(A^T A)
  double residual = 0.0;    // ||A^T A v - value v|| / value at the returned v
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr std::uint64_t kPowerIterationSeed = 0x5EED;

/// Power iteration on A^T A. The start vector is drawn from a generator
/// seeded with kPowerIterationSeed, so repeated calls return identical
/// results. When max_iters is exhausted the best estimate is returned with
/// converged == false.
SpectralEstimate spectral_norm_sq(const SparseMatrixCSR& a, double tol = 1e-10,
                                  std::size_t max_iters = 10000);

}  // namespace gces
