#include "gces/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gces/errors.hpp"
#include "gces/libsvm.hpp"
#include "gces/random.hpp"

namespace gces {

namespace {

double lambda_max(const SparseMatrixCSR& a) {
  const SpectralEstimate est = spectral_norm_sq(a, 1e-10, 20000);
  return est.value;
}

void check_taus(double tau1, double tau2, const char* where) {
  if (!(tau1 >= 0.0) || !(tau2 >= 0.0) || !std::isfinite(tau1) || !std::isfinite(tau2)) {
    throw InvalidArgument(std::string(where) + ": tau1 and tau2 must be finite and >= 0");
  }
}

void check_labels(const DenseVector& b) {
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b[i] != 1.0 && b[i] != -1.0) {
      throw InvalidArgument("logistic loss: label " + std::to_string(b[i]) + " at row " +
                            std::to_string(i) + " is not +-1");
    }
  }
}

}  // namespace

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

QuadraticLossOracle::QuadraticLossOracle(QuadraticElasticNet q) : q_(std::move(q)) {
  if (static_cast<std::size_t>(q_.b.size()) != q_.A.rows()) {
    throw DimensionError("quadratic loss: b has " + std::to_string(q_.b.size()) +
                         " entries, A has " + std::to_string(q_.A.rows()) + " rows");
  }
  check_taus(q_.tau1, q_.tau2, "quadratic loss");
}

double QuadraticLossOracle::value(const DenseVector& x) const {
  const DenseVector r = spmv(q_.A, x) - q_.b;
  return 0.5 * r.squaredNorm() + 0.5 * q_.tau1 * x.squaredNorm();
}

DenseVector QuadraticLossOracle::gradient(const DenseVector& x) const {
  const DenseVector r = spmv(q_.A, x) - q_.b;
  DenseVector g = spmv_transpose(q_.A, r);
  g += q_.tau1 * x;
  return g;
}

LogisticLossOracle::LogisticLossOracle(LogisticElasticNet l) : l_(std::move(l)) {
  if (static_cast<std::size_t>(l_.b.size()) != l_.A.rows()) {
    throw DimensionError("logistic loss: label count does not match rows");
  }
  if (l_.A.rows() == 0) throw InvalidArgument("logistic loss: no samples");
  check_labels(l_.b);
  check_taus(l_.tau1, l_.tau2, "logistic loss");
}

double LogisticLossOracle::value(const DenseVector& x) const {
  const DenseVector ax = spmv(l_.A, x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i) sum += softplus(-l_.b[i] * ax[i]);
  return sum / static_cast<double>(l_.m()) + 0.5 * l_.tau1 * x.squaredNorm();
}

DenseVector LogisticLossOracle::gradient(const DenseVector& x) const {
  const DenseVector ax = spmv(l_.A, x);
  DenseVector w(ax.size());
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    w[i] = -l_.b[i] * sigmoid(-l_.b[i] * ax[i]);
  }
  DenseVector g = spmv_transpose(l_.A, w) / static_cast<double>(l_.m());
  g += l_.tau1 * x;
  return g;
}

QuadraticElasticNet make_synthetic(const SyntheticSpec& spec) {
  if (spec.m < 2) throw InvalidArgument("make_synthetic: m must be >= 2");
  if (spec.xi < 1) throw InvalidArgument("make_synthetic: xi must be >= 1");
  check_taus(spec.tau1, spec.tau2, "make_synthetic");

  Rng rng(spec.seed);
  const auto levels = static_cast<std::uint64_t>(spec.xi) + 1;
  std::vector<double> diag(spec.m);
  const double smallest = std::pow(10.0, -spec.xi);
  diag[0] = 1.0;
  diag[1] = smallest;
  for (std::size_t i = 2; i < spec.m; ++i) {
    diag[i] = std::pow(10.0, -static_cast<double>(rng.below(levels)));
  }
  DenseVector b(static_cast<Eigen::Index>(spec.m));
  for (std::size_t i = 0; i < spec.m; ++i) b[static_cast<Eigen::Index>(i)] = rng.uniform();

  QuadraticElasticNet q;
  q.A = SparseMatrixCSR::diagonal(diag);
  q.b = std::move(b);
  q.tau1 = spec.tau1;
  q.tau2 = spec.tau2;
  q.loss_lipschitz = 1.0;
  q.loss_strong_convexity = smallest * smallest;
  q.entry_condition = 1.0 / smallest;
  return q;
}

LogisticElasticNet make_synthetic_logistic(const SyntheticLogisticSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) {
    throw InvalidArgument("make_synthetic_logistic: empty shape");
  }
  if (!(spec.density > 0.0) || spec.density > 1.0) {
    throw InvalidArgument("make_synthetic_logistic: density must be in (0, 1]");
  }
  check_taus(spec.tau1, spec.tau2, "make_synthetic_logistic");

  Rng rng(spec.seed);
  const DenseVector w = rng.normal_vector(static_cast<Eigen::Index>(spec.cols));
  std::vector<Triplet> triplets;
  DenseVector b(static_cast<Eigen::Index>(spec.rows));
  for (std::size_t r = 0; r < spec.rows; ++r) {
    std::vector<Triplet> row;
    for (std::size_t c = 0; c < spec.cols; ++c) {
      if (rng.uniform() < spec.density) row.push_back({r, c, rng.normal()});
    }
    if (row.empty()) row.push_back({r, rng.below(spec.cols), rng.normal()});
    double norm_sq = 0.0;
    for (const Triplet& t : row) norm_sq += t.value * t.value;
    const double scale = 1.0 / std::sqrt(norm_sq);
    double margin = 0.0;
    for (Triplet& t : row) {
      t.value *= scale;
      margin += t.value * w[static_cast<Eigen::Index>(t.col)];
    }
    double label = margin >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < 0.1) label = -label;
    b[static_cast<Eigen::Index>(r)] = label;
    triplets.insert(triplets.end(), row.begin(), row.end());
  }

  LogisticElasticNet l;
  l.A = SparseMatrixCSR::from_triplets(spec.rows, spec.cols, std::move(triplets));
  l.b = std::move(b);
  l.tau1 = spec.tau1;
  l.tau2 = spec.tau2;
  l.loss_lipschitz = lambda_max(l.A) / (4.0 * static_cast<double>(spec.rows));
  return l;
}

QuadraticElasticNet quadratic_from_dataset(const LabeledDataset& ds, double tau1, double tau2) {
  check_taus(tau1, tau2, "quadratic_from_dataset");
  QuadraticElasticNet q;
  q.A = ds.features;
  q.b = ds.labels;
  q.tau1 = tau1;
  q.tau2 = tau2;
  q.loss_lipschitz = lambda_max(q.A);
  return q;
}

LogisticElasticNet logistic_from_dataset(const LabeledDataset& ds, double tau1, double tau2) {
  check_taus(tau1, tau2, "logistic_from_dataset");
  check_labels(ds.labels);
  LogisticElasticNet l;
  l.A = ds.features;
  l.b = ds.labels;
  l.tau1 = tau1;
  l.tau2 = tau2;
  l.loss_lipschitz = lambda_max(l.A) / (4.0 * static_cast<double>(l.A.rows()));
  return l;
}

ZooProblem quadratic_oracle(QuadraticElasticNet q) {
  const double tau2 = q.tau2;
  ZooProblem z;
  z.smooth = std::make_shared<QuadraticLossOracle>(std::move(q));
  z.regularizer = ProxSpec::l1();
  z.tau = tau2;
  return z;
}

ZooProblem logistic_oracle(LogisticElasticNet l) {
  const double tau2 = l.tau2;
  ZooProblem z;
  z.smooth = std::make_shared<LogisticLossOracle>(std::move(l));
  z.regularizer = ProxSpec::l1();
  z.tau = tau2;
  return z;
}

}  // namespace gces
