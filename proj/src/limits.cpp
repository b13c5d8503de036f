#include "cyclicurn/limits.hpp"

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <Eigen/Eigenvalues>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/exact_moments.hpp"

namespace cyclicurn {

namespace {

void require_symmetric(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() != a.cols()) throw ParameterError("matrix must be square");
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > rel_tol * scale) {
    throw ParameterError("matrix must be symmetric");
  }
}

Eigen::MatrixXcd outer(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

void require_large(int m, int k, const char* what) {
  if (k < 1 || k >= m) throw ParameterError(std::string(what) + ": k out of range");
  if (projection_kind(m, k) != ProjectionKind::Large) {
    throw DomainError(std::string(what) + ": requires lambda_k > 1/2");
  }
}

// u^w for u in [0, 1] and Re w > 0.
cdouble unit_power(double u, cdouble w) { return u <= 0.0 ? cdouble(0.0) : std::exp(w * std::log(u)); }

cdouble g_unchecked(double u, int m, int k) {
  const cdouble w = root_of_unity(k, m);
  return (unit_power(u, w) + w * unit_power(1.0 - u, w) - 1.0) / gamma_at_root(m, k);
}

}  // namespace

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_symmetric(entries_, 1e-14);
}

Eigen::VectorXd CovMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

CovMatrix real_cov(const Eigen::MatrixXcd& hermitian, double max_imag) {
  if (hermitian.imag().cwiseAbs().maxCoeff() > max_imag) {
    throw ParameterError("covariance construction is not real");
  }
  Eigen::MatrixXd re = hermitian.real();
  // symmetrize away rounding
  return CovMatrix(0.5 * (re + re.transpose()));
}

CovMatrix sigma_k(int m, int k) {
  if (m < 2 || k < 1 || k > m / 2) throw ParameterError("sigma_k: k must lie in [1, m/2]");
  const EigenData eig = eigen_data(m);
  switch (projection_kind(m, k)) {
    case ProjectionKind::Alternating:
      return real_cov(outer(eig.v[k]) / 3.0);
    case ProjectionKind::Critical:
      return real_cov(outer(eig.v[k]) + outer(eig.v[m - k]));
    default: {
      const double w = 1.0 / std::abs(2.0 * eig.lambda[k] - 1.0);
      return real_cov(w * (outer(eig.v[k]) + outer(eig.v[m - k])));
    }
  }
}

CovMatrix sigma_total(int m) {
  if (m < 7) throw DomainError("sigma_total: defined for m >= 7");
  const EigenData eig = eigen_data(m);
  if (m % 6 == 0) return real_cov(outer(eig.v[m / 6]) + outer(eig.v[5 * m / 6]));
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 1; k < m; ++k) acc += outer(eig.v[k]) / std::abs(2.0 * eig.lambda[k] - 1.0);
  return real_cov(acc);
}

int numerical_rank(const Eigen::MatrixXd& matrix, double tol) {
  require_symmetric(matrix, 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  if (largest == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rank += ev[i] > tol * largest ? 1 : 0;
  return rank;
}

cdouble g_k(double u, int m, int k) {
  require_large(m, k, "g_k");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("g_k: u must lie in (0, 1)");
  return g_unchecked(u, m, k);
}

cdouble fixpoint_rhs(cdouble xi0, cdouble xi1, double u, int m, int k) {
  require_large(m, k, "fixpoint_rhs");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("fixpoint_rhs: u must lie in (0, 1)");
  const cdouble w = root_of_unity(k, m);
  return unit_power(u, w) * xi0 + w * unit_power(1.0 - u, w) * xi1 + g_unchecked(u, m, k);
}

cdouble integrate_g_k(int m, int k) {
  require_large(m, k, "integrate_g_k");
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double re = integrator.integrate([&](double u) { return g_unchecked(u, m, k).real(); }, 0.0, 1.0);
  const double im = integrator.integrate([&](double u) { return g_unchecked(u, m, k).imag(); }, 0.0, 1.0);
  return {re, im};
}

}  // namespace cyclicurn
