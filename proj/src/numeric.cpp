#include "gces/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "gces/errors.hpp"

namespace gces {

void require_same_size(const DenseVector& a, const DenseVector& b, const char* where) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(where) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "dot");
  return a.dot(b);
}

DenseVector axpby(double alpha, const DenseVector& x, double beta, const DenseVector& y) {
  require_same_size(x, y, "axpby");
  return alpha * x + beta * y;
}

bool all_finite(const DenseVector& x) { return x.allFinite(); }

SparseMatrixCSR::SparseMatrixCSR() : row_offsets_{0} {}

SparseMatrixCSR::SparseMatrixCSR(std::size_t n_rows, std::size_t n_cols,
                                 std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != n_rows_ + 1) {
    throw InvalidArgument("SparseMatrixCSR: row_offsets must have n_rows + 1 entries");
  }
  if (row_offsets_.front() != 0) {
    throw InvalidArgument("SparseMatrixCSR: row_offsets must start at 0");
  }
  if (row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
    throw InvalidArgument("SparseMatrixCSR: row_offsets.back(), col_indices and values disagree");
  }
  for (std::size_t r = 0; r < n_rows_; ++r) {
    if (row_offsets_[r] > row_offsets_[r + 1]) {
      throw InvalidArgument("SparseMatrixCSR: row_offsets must be non-decreasing");
    }
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      if (col_indices_[p] >= n_cols_) {
        throw InvalidArgument("SparseMatrixCSR: column index out of range in row " +
                              std::to_string(r));
      }
      if (p > row_offsets_[r] && col_indices_[p] <= col_indices_[p - 1]) {
        throw InvalidArgument("SparseMatrixCSR: column indices not strictly increasing in row " +
                              std::to_string(r));
      }
    }
  }
}

SparseMatrixCSR SparseMatrixCSR::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                               std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(n_rows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (t.row >= n_rows || t.col >= n_cols) {
      throw InvalidArgument("SparseMatrixCSR::from_triplets: entry out of range");
    }
    if (i > 0 && t.row == triplets[i - 1].row && t.col == triplets[i - 1].col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseMatrixCSR(n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrixCSR SparseMatrixCSR::diagonal(std::span<const double> entries) {
  const std::size_t n = entries.size();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return SparseMatrixCSR(n, n, std::move(offsets), std::move(cols),
                         std::vector<double>(entries.begin(), entries.end()));
}

SparseMatrixCSR SparseMatrixCSR::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrixCSR SparseMatrixCSR::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> triplets;
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) {
        triplets.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), dense(r, c)});
      }
    }
  }
  return from_triplets(static_cast<std::size_t>(dense.rows()),
                       static_cast<std::size_t>(dense.cols()), std::move(triplets));
}

std::span<const std::size_t> SparseMatrixCSR::row_indices(std::size_t row) const {
  return std::span<const std::size_t>(col_indices_).subspan(
      row_offsets_[row], row_offsets_[row + 1] - row_offsets_[row]);
}

std::span<const double> SparseMatrixCSR::row_values(std::size_t row) const {
  return std::span<const double>(values_).subspan(row_offsets_[row],
                                                  row_offsets_[row + 1] - row_offsets_[row]);
}

SparseMatrixCSR SparseMatrixCSR::truncated(std::size_t max_rows, std::size_t max_cols) const {
  const std::size_t rows = max_rows == 0 ? n_rows_ : std::min(max_rows, n_rows_);
  const std::size_t cols = max_cols == 0 ? n_cols_ : std::min(max_cols, n_cols_);
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      if (col_indices_[p] < cols) {
        idx.push_back(col_indices_[p]);
        vals.push_back(values_[p]);
      }
    }
    offsets.push_back(idx.size());
  }
  return SparseMatrixCSR(rows, cols, std::move(offsets), std::move(idx), std::move(vals));
}

DenseMatrix SparseMatrixCSR::to_dense() const {
  DenseMatrix dense = DenseMatrix::Zero(static_cast<Eigen::Index>(n_rows_),
                                        static_cast<Eigen::Index>(n_cols_));
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_indices_[p])) = values_[p];
    }
  }
  return dense;
}

DenseVector spmv(const SparseMatrixCSR& a, const DenseVector& x) {
  if (static_cast<std::size_t>(x.size()) != a.cols()) {
    throw DimensionError("spmv: x has " + std::to_string(x.size()) + " entries, matrix has " +
                         std::to_string(a.cols()) + " columns");
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  DenseVector out(static_cast<Eigen::Index>(a.rows()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      acc += vals[p] * x[static_cast<Eigen::Index>(cols[p])];
    }
    out[static_cast<Eigen::Index>(r)] = acc;
  }
  return out;
}

DenseVector spmv_transpose(const SparseMatrixCSR& a, const DenseVector& x) {
  if (static_cast<std::size_t>(x.size()) != a.rows()) {
    throw DimensionError("spmv_transpose: x has " + std::to_string(x.size()) +
                         " entries, matrix has " + std::to_string(a.rows()) + " rows");
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  DenseVector out = DenseVector::Zero(static_cast<Eigen::Index>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double xr = x[static_cast<Eigen::Index>(r)];
    if (xr == 0.0) continue;
    for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      out[static_cast<Eigen::Index>(cols[p])] += vals[p] * xr;
    }
  }
  return out;
}

SpectralEstimate spectral_norm_sq(const SparseMatrixCSR& a, double tol, std::size_t max_iters) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw InvalidArgument("spectral_norm_sq: empty matrix");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("spectral_norm_sq: tol must be positive");
  }
  std::mt19937_64 rng(kPowerIterationSeed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DenseVector v(static_cast<Eigen::Index>(a.cols()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = unif(rng);
  v.normalize();

  SpectralEstimate best;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= max_iters; ++it) {
    const DenseVector av = spmv(a, v);
    const DenseVector w = spmv_transpose(a, av);
    const double rayleigh = av.squaredNorm();
    if (rayleigh == 0.0) {
      // v lies in the null space; A is either zero or the start was unlucky.
      // With a random start only the zero matrix lands here.
      return SpectralEstimate{0.0, 0.0, it, true};
    }
    const double residual = (w - rayleigh * v).norm() / rayleigh;
    if (residual < best.residual) {
      best = SpectralEstimate{rayleigh, residual, it, false};
    }
    if (residual <= tol) {
      best.converged = true;
      return best;
    }
    v = w / w.norm();
  }
  best.iterations = max_iters;
  return best;
}

}  // namespace gces
