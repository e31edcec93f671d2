#pragma once

#include <string_view>

#include "gces/numeric.hpp"

namespace gces {

enum class ProxKind { Zero, L1, SquaredL2Shifted, ElasticNet };

std::string_view to_string(ProxKind kind);

/// A coordinate-separable regularizer with closed-form proximal map.
///
/// Every supported kind is a special case of
///
///   g(z) = w1 * ||z||_1 + (q / 2) ||z - c||^2 + <l, z> + offset
///
/// with w1, q >= 0. The named kinds set (w1, q, c); the linear part l and the
/// constant offset only appear after strong convexity has been moved out of
/// g (see without_strong_convexity).
class ProxSpec {
 public:
  static ProxSpec zero();
  static ProxSpec l1();
  /// (coeff / 2) ||z - center||^2, strong convexity coeff.
  static ProxSpec squared_l2_shifted(DenseVector center, double coeff);
  /// a ||z||_1 + ((1 - a) / 2) ||z||^2 for a = l1_weight_fraction in [0, 1].
  static ProxSpec elastic_net(double l1_weight_fraction);

  ProxKind kind() const noexcept { return kind_; }
  /// Strong-convexity modulus of g.
  double mu_g() const noexcept { return quad_coeff_; }
  double l1_weight() const noexcept { return l1_weight_; }
  double quad_coeff() const noexcept { return quad_coeff_; }
  /// True once the quadratic part has been traded for a linear term.
  bool transferred() const noexcept { return transferred_; }

  double value(const DenseVector& z) const;

  /// g(z) - (mu_g / 2) ||z - anchor||^2, which is again of the form above
  /// with q = 0. Identity when mu_g == 0.
  ProxSpec without_strong_convexity(const DenseVector& anchor) const;

  /// An element of the subdifferential at z for the smooth part
  /// (q (z - c) + l), i.e. everything except the l1 term.
  DenseVector smooth_part_gradient(const DenseVector& z) const;

 private:
  ProxSpec() = default;

  double center_at(Eigen::Index i) const { return center_.size() == 0 ? 0.0 : center_[i]; }
  double linear_at(Eigen::Index i) const { return linear_.size() == 0 ? 0.0 : linear_[i]; }
  void check_dimension(const DenseVector& z, const char* where) const;

  friend DenseVector prox(const ProxSpec&, double, const DenseVector&);
  friend bool subdifferential_check(const ProxSpec&, const DenseVector&, const DenseVector&,
                                    double);

  ProxKind kind_ = ProxKind::Zero;
  double l1_weight_ = 0.0;
  double quad_coeff_ = 0.0;
  DenseVector center_;  // empty means the zero vector
  DenseVector linear_;  // empty means the zero vector
  double offset_ = 0.0;
  bool transferred_ = false;
};

/// argmin_z g(z) + (1 / (2 t)) ||z - x||^2. Throws InvalidArgument if t <= 0.
/// Soft-threshold ties (|u| == threshold) map to exactly 0.
DenseVector prox(const ProxSpec& spec, double t, const DenseVector& x);

/// True iff s is in the subdifferential of g at z, within tol.
bool subdifferential_check(const ProxSpec& spec, const DenseVector& z, const DenseVector& s,
                           double tol = 1e-8);

/// Scalar soft-threshold, sign(u) max(|u| - threshold, 0).
double soft_threshold(double u, double threshold);

}  // namespace gces
