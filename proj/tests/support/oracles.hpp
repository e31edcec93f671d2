#pragma once

// Independent reference implementations the tests compare against. None of
// these call into the code paths they check.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gces/numeric.hpp"
#include "gces/prox.hpp"

namespace gces::oracle {

/// Coordinate-wise golden-section minimization of
///   g(z) + ||z - x||^2 / (2 t)
/// using only ProxSpec::value. Exact up to the search tolerance because every
/// supported regularizer is separable and convex.
DenseVector brute_force_prox(const ProxSpec& g, double t, const DenseVector& x);

/// Central-difference gradient.
DenseVector finite_difference_gradient(const std::function<double(const DenseVector&)>& f,
                                       const DenseVector& x, double h = 1e-6);

/// max_i |g_i - fd_i| / max(1, ||fd||_inf).
double gradient_relative_error(const DenseVector& g, const DenseVector& fd);

/// Constant-step fast gradient method for an L-smooth, mu-strongly convex f
/// (estimate-sequence form with gamma_0 given), returning x_1..x_K.
std::vector<DenseVector> textbook_fgm(const std::function<DenseVector(const DenseVector&)>& grad,
                                      double L, double mu, double gamma0, const DenseVector& x0,
                                      std::size_t iterations);

/// Minimizer of 0.5||diag(d) x - b||^2 + tau1/2 ||x||^2 + tau2 ||x||_1.
DenseVector diagonal_elastic_net_solution(const DenseVector& d, const DenseVector& b, double tau1,
                                          double tau2);

/// 0.5||A x - b||^2 + tau1/2 ||x||^2 through dense products.
double dense_quadratic_value(const DenseMatrix& A, const DenseVector& b, double tau1,
                             const DenseVector& x);
DenseVector dense_quadratic_gradient(const DenseMatrix& A, const DenseVector& b, double tau1,
                                     const DenseVector& x);

/// Largest eigenvalue of A^T A via a dense symmetric eigensolver.
double dense_lambda_max(const DenseMatrix& A);

/// Deterministic test vectors.
DenseVector gaussian_vector(std::size_t n, std::uint64_t seed, double scale = 1.0);

}  // namespace gces::oracle
