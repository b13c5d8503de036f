#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cyclicurn/spectral.hpp"

namespace cyclicurn {

/// Real symmetric positive semi-definite m x m matrix.
class CovMatrix {
 public:
  /// Throws ParameterError if `entries` is not square or not symmetric to 1e-14
  /// (relative to its largest entry).
  explicit CovMatrix(Eigen::MatrixXd entries);

  int m() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Real part of a Hermitian construction; the imaginary residue is checked.
CovMatrix real_cov(const Eigen::MatrixXcd& hermitian, double max_imag = 1e-14);

/// Sigma_k for 1 <= k <= floor(m/2):
///   (v_k v_k^* + v_{m-k} v_{m-k}^*) / |2 lambda_k - 1|   generic k,
///   v_k v_k^* + v_{m-k} v_{m-k}^*                          lambda_k = 1/2,
///   v_{m/2} v_{m/2}^* / 3                                  k = m/2.
CovMatrix sigma_k(int m, int k);

/// Limit covariance of the theorem-level residual (m >= 7):
///   6 does not divide m: sum_{k=1}^{m-1} v_k v_k^* / |2 lambda_k - 1|,
///   6 divides m:         v_{m/6} v_{m/6}^* + v_{5m/6} v_{5m/6}^*.
CovMatrix sigma_total(int m);

/// Number of eigenvalues above tol * (largest eigenvalue).  Throws
/// ParameterError for non-symmetric input.
int numerical_rank(const Eigen::MatrixXd& matrix, double tol = 1e-9);
inline int numerical_rank(const CovMatrix& matrix, double tol = 1e-9) { return numerical_rank(matrix.entries(), tol); }

/// g_k(u) = (u^{omega^k} + omega^k (1-u)^{omega^k} - 1) / Gamma(1 + omega^k),
/// 0 < u < 1, lambda_k > 1/2.
cdouble g_k(double u, int m, int k);

/// u^{omega^k} xi0 + omega^k (1-u)^{omega^k} xi1 + g_k(u).
cdouble fixpoint_rhs(cdouble xi0, cdouble xi1, double u, int m, int k);

/// Integral of g_k over (0,1) by tanh-sinh quadrature (zero analytically).
cdouble integrate_g_k(int m, int k);

}  // namespace cyclicurn
