#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cyclicurn {

using cdouble = std::complex<double>;

/// omega^e for omega = exp(2 pi i / m).  Computed from the reduced angle of
/// each exponent; exact on multiples of 60 and 90 degrees, and
/// omega^{m-r} is the exact conjugate of omega^r.
cdouble root_of_unity(std::int64_t e, int m);

/// How projection k behaves, decided in integer arithmetic.
enum class ProjectionKind {
  Drift,        ///< k = 0
  Large,        ///< lambda_k > 1/2
  Critical,     ///< lambda_k = 1/2 (6 | m, k in {m/6, 5m/6})
  Small,        ///< lambda_k < 1/2, k != m/2
  Alternating,  ///< k = m/2, lambda = -1
};

ProjectionKind projection_kind(int m, int k);

/// Number r = floor((m-1)/6) of large pairs.
int large_pair_count(int m);

/// Roots of unity and the eigenvectors v_k = (1/m)(omega^{-kt})_t of the
/// replacement matrix.
struct EigenData {
  int m = 0;
  std::vector<cdouble> omega;   ///< omega^k
  std::vector<double> lambda;   ///< cos(2 pi k/m)
  std::vector<double> mu;       ///< sin(2 pi k/m)
  std::vector<Eigen::VectorXcd> v;
};

EigenData eigen_data(int m);

/// u_k(x) = sum_t omega^{kt} x_t, the coordinate of x along v_k.
cdouble dft_coordinate(const Eigen::VectorXcd& x, int k);
cdouble dft_coordinate(const Eigen::VectorXd& x, int k);

/// All m coordinates by the direct O(m^2) transform.
Eigen::VectorXcd dft_coordinates(const Eigen::VectorXd& x);
Eigen::VectorXcd dft_coordinates(const std::vector<std::uint64_t>& counts);

/// x = sum_k u_k v_k.
Eigen::VectorXcd reconstruct(const Eigen::VectorXcd& coords);

/// (pi_k + pi_{m-k})(x) = 2 Re(u_k(x) v_k), or pi_{m/2}(x) for k = m/2.
Eigen::VectorXd project_pair(const Eigen::VectorXd& x, int k);

/// R^t x: (R^t x)_i = x_{i-1 mod m}.
Eigen::VectorXd shift_action(const Eigen::VectorXd& x);
Eigen::VectorXcd shift_action(const Eigen::VectorXcd& x);
std::vector<std::uint64_t> shift_action(const std::vector<std::uint64_t>& counts, int times = 1);

/// Change of u_k when a ball of type t is added: omega^{k t}.
inline cdouble coordinate_increment(int k, int added_type, int m) {
  return root_of_unity(static_cast<std::int64_t>(k) * added_type, m);
}

}  // namespace cyclicurn
