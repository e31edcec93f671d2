#include "gces/prox.hpp"

#include <cmath>
#include <string>

#include "gces/errors.hpp"

namespace gces {

std::string_view to_string(ProxKind kind) {
  switch (kind) {
    case ProxKind::Zero:
      return "zero";
    case ProxKind::L1:
      return "l1";
    case ProxKind::SquaredL2Shifted:
      return "squared_l2_shifted";
    case ProxKind::ElasticNet:
      return "elastic_net";
  }
  return "unknown";
}

double soft_threshold(double u, double threshold) {
  if (u > threshold) return u - threshold;
  if (u < -threshold) return u + threshold;
  return 0.0;
}

ProxSpec ProxSpec::zero() { return ProxSpec{}; }

ProxSpec ProxSpec::l1() {
  ProxSpec s;
  s.kind_ = ProxKind::L1;
  s.l1_weight_ = 1.0;
  return s;
}

ProxSpec ProxSpec::squared_l2_shifted(DenseVector center, double coeff) {
  if (!(coeff >= 0.0) || !std::isfinite(coeff)) {
    throw InvalidArgument("squared_l2_shifted: coefficient must be finite and >= 0");
  }
  ProxSpec s;
  s.kind_ = ProxKind::SquaredL2Shifted;
  s.quad_coeff_ = coeff;
  s.center_ = std::move(center);
  return s;
}

ProxSpec ProxSpec::elastic_net(double l1_weight_fraction) {
  if (!(l1_weight_fraction >= 0.0 && l1_weight_fraction <= 1.0)) {
    throw InvalidArgument("elastic_net: l1 weight fraction must lie in [0, 1]");
  }
  ProxSpec s;
  s.kind_ = ProxKind::ElasticNet;
  s.l1_weight_ = l1_weight_fraction;
  s.quad_coeff_ = 1.0 - l1_weight_fraction;
  return s;
}

void ProxSpec::check_dimension(const DenseVector& z, const char* where) const {
  if ((center_.size() != 0 && center_.size() != z.size()) ||
      (linear_.size() != 0 && linear_.size() != z.size())) {
    throw DimensionError(std::string(where) + ": regularizer dimension does not match input");
  }
}

double ProxSpec::value(const DenseVector& z) const {
  check_dimension(z, "ProxSpec::value");
  double out = offset_;
  if (l1_weight_ != 0.0) out += l1_weight_ * z.lpNorm<1>();
  if (quad_coeff_ != 0.0) {
    out += 0.5 * quad_coeff_ * (center_.size() == 0 ? z.squaredNorm() : (z - center_).squaredNorm());
  }
  if (linear_.size() != 0) out += linear_.dot(z);
  return out;
}

ProxSpec ProxSpec::without_strong_convexity(const DenseVector& anchor) const {
  if (quad_coeff_ == 0.0) return *this;
  check_dimension(anchor, "without_strong_convexity");
  // (q/2)||z - c||^2 - (q/2)||z - x0||^2 = q <x0 - c, z> + (q/2)(||c||^2 - ||x0||^2)
  const DenseVector c = center_.size() == 0 ? DenseVector::Zero(anchor.size()) : center_;
  ProxSpec out = *this;
  out.quad_coeff_ = 0.0;
  out.center_.resize(0);
  DenseVector lin = quad_coeff_ * (anchor - c);
  if (linear_.size() != 0) lin += linear_;
  out.linear_ = std::move(lin);
  out.offset_ = offset_ + 0.5 * quad_coeff_ * (c.squaredNorm() - anchor.squaredNorm());
  out.transferred_ = true;
  return out;
}

DenseVector ProxSpec::smooth_part_gradient(const DenseVector& z) const {
  check_dimension(z, "smooth_part_gradient");
  DenseVector g = DenseVector::Zero(z.size());
  if (quad_coeff_ != 0.0) {
    g = center_.size() == 0 ? DenseVector(quad_coeff_ * z) : DenseVector(quad_coeff_ * (z - center_));
  }
  if (linear_.size() != 0) g += linear_;
  return g;
}

DenseVector prox(const ProxSpec& spec, double t, const DenseVector& x) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("prox: step t must be positive and finite");
  }
  spec.check_dimension(x, "prox");
  if (spec.kind_ == ProxKind::Zero && spec.linear_.size() == 0) return x;

  // Stationarity of w1 |z| + (q/2)(z - c)^2 + l z + (1/2t)(z - x)^2:
  // complete the square around u = (x + t q c - t l) / (1 + t q), then
  // soft-threshold with w1 t / (1 + t q).
  const double q = spec.quad_coeff_;
  const double denom = 1.0 + t * q;
  const double thresh = spec.l1_weight_ * t / denom;
  DenseVector z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = (x[i] + t * q * spec.center_at(i) - t * spec.linear_at(i)) / denom;
    z[i] = thresh > 0.0 ? soft_threshold(u, thresh) : u;
  }
  return z;
}

bool subdifferential_check(const ProxSpec& spec, const DenseVector& z, const DenseVector& s,
                           double tol) {
  require_same_size(z, s, "subdifferential_check");
  spec.check_dimension(z, "subdifferential_check");
  const double w1 = spec.l1_weight_;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double rest = s[i] - spec.quad_coeff_ * (z[i] - spec.center_at(i)) - spec.linear_at(i);
    if (z[i] != 0.0) {
      const double expected = w1 * (z[i] > 0.0 ? 1.0 : -1.0);
      if (std::abs(rest - expected) > tol) return false;
    } else if (std::abs(rest) > w1 + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace gces
