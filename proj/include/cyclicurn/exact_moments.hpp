#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyclicurn/spectral.hpp"

namespace cyclicurn {

/// z = exp(log_modulus) * exp(i phase), phase in (-pi, pi], with an explicit
/// zero.  Products of many factors of size 1 + O(1/s) stay accurate and
/// cannot overflow.
class LogPolarComplex {
 public:
  LogPolarComplex() = default;  // one

  static LogPolarComplex zero();
  static LogPolarComplex from(cdouble z);
  /// Phase is wrapped into (-pi, pi].
  static LogPolarComplex from_log_polar(double log_modulus, double phase);

  double log_modulus() const noexcept { return log_modulus_; }
  double phase() const noexcept { return phase_; }
  bool is_zero() const noexcept { return zero_; }
  double modulus() const;
  cdouble value() const;

  /// Throws DomainError for zero.
  LogPolarComplex inverse() const;

  LogPolarComplex& operator*=(const LogPolarComplex& other);
  friend LogPolarComplex operator*(LogPolarComplex a, const LogPolarComplex& b) { return a *= b; }

 private:
  double log_modulus_ = 0.0;
  double phase_ = 0.0;
  bool zero_ = false;
};

/// prod_{s=1}^{n} (1 + z/s) = Gamma(n+1+z) / (Gamma(n+1) Gamma(1+z)).
LogPolarComplex gamma_ratio(std::uint64_t n, cdouble z);

/// gamma_ratio at every checkpoint (any order) in one pass.
std::vector<LogPolarComplex> gamma_ratio_path(cdouble z, std::span<const std::uint64_t> checkpoints);

/// Gamma(1 + omega^k).
cdouble gamma_at_root(int m, int k);

/// E[u_k(R_n)] for the urn started with one ball of type initial_type.
cdouble mean_u(std::uint64_t n, int m, int k, int initial_type = 0);

/// E[R_n] = sum_k E[u_k(R_n)] v_k.
Eigen::VectorXd mean_vector(std::uint64_t n, int m, int initial_type = 0);
std::vector<Eigen::VectorXd> mean_vector_path(int m, int initial_type, std::span<const std::uint64_t> checkpoints);

/// E[u_k(R_n) u_l(R_n)] for initial type 0, in O(n).
cdouble mixed_moment(std::uint64_t n, int m, int k, int l);

/// Normalizer of the martingale M_{n,k} = c_{n,k} u_k(R_n - E R_n):
/// c_{n,k} = Gamma(n+1)/Gamma(n+1+omega^k) for k != m/2 and n for k = m/2.
cdouble martingale_scale(std::uint64_t n, int m, int k);

/// Exact second-order quantities at one step index.
struct CrossMomentPoint {
  std::uint64_t n = 0;
  cdouble mixed;        ///< E[u_k u_l]
  cdouble mean_k;       ///< E[u_k]
  cdouble mean_l;       ///< E[u_l]
  cdouble centered;     ///< E[u_k u_l] - E[u_k] E[u_l]
  cdouble martingale;   ///< E[M_{n,k} M_{n,l}]
};

/// All CrossMomentPoints for (k, l) along the checkpoints (any order) in one
/// O(max checkpoint) pass, initial type 0.
std::vector<CrossMomentPoint> cross_moment_path(int m, int k, int l, std::span<const std::uint64_t> checkpoints);

/// E|M_{n,k}|^2.
double second_moment_M(std::uint64_t n, int m, int k);

/// Mean and (lazily) mixed moments of all spectral coordinates at step n.
class MomentTable {
 public:
  MomentTable(int m, std::uint64_t n, int initial_type = 0);

  int m() const noexcept { return m_; }
  std::uint64_t n() const noexcept { return n_; }
  cdouble mean_u(int k) const { return mean_u_.at(static_cast<std::size_t>(k)); }
  Eigen::VectorXd mean_vector() const;
  /// E[u_k u_l], computed on first use.
  cdouble mixed(int k, int l);

 private:
  int m_;
  std::uint64_t n_;
  int initial_type_;
  std::vector<cdouble> mean_u_;
  std::vector<std::optional<cdouble>> mixed_;
};

/// L2 distance between M_{n,k} and its limit.
///
/// E|Xi_k|^2 is taken as E|M_{N,k}|^2 at N = N_limit plus a tail correction
/// obtained by Richardson extrapolation in N^{1-2 lambda_k} from the values at
/// N/2 and N.  `raw` is the uncorrected E|M_N|^2 - E|M_n|^2 = E|M_N - M_n|^2.
struct ResidualL2 {
  std::uint64_t n = 0;
  std::uint64_t n_limit = 0;
  double lambda = 0.0;
  double second_moment_n = 0.0;
  double second_moment_limit = 0.0;
  double raw = 0.0;
  double tail = 0.0;
  double value = 0.0;       ///< raw + tail
  double normalized = 0.0;  ///< value * (2 lambda - 1) n^{2 lambda - 1}
  double raw_normalized = 0.0;
  std::string model;
};

/// Requires lambda_k > 1/2 (DomainError otherwise) and n <= n_limit.
ResidualL2 residual_l2(std::uint64_t n, int m, int k, std::uint64_t n_limit);

/// Same as residual_l2 for every n of a grid, sharing one pass.
std::vector<ResidualL2> residual_l2_grid(std::span<const std::uint64_t> ns, int m, int k, std::uint64_t n_limit);

/// (n+1)/m 1 + sum_{k=1}^{r} Re(n^{i mu_k} xi_k) n^{lambda_k},
/// xi_k = 2 v_k / Gamma(1 + omega^k), r = floor((m-1)/6).
Eigen::VectorXd mean_expansion(std::uint64_t n, int m);

struct MixedResidualCheck {
  double measured = 0.0;  ///< |E[(M_{n,k} - Xi_k)(M_{n,l} - Xi_l)]|
  double scale = 0.0;     ///< 1/n + n^{lambda_{k+l} - lambda_k - lambda_l}
  double ratio = 0.0;
};

/// Cross residual with the limit realized at n_limit.  Requires k != l and
/// both projections large.
MixedResidualCheck mixed_residual_bound_check(std::uint64_t n, int m, int k, int l, std::uint64_t n_limit);

}  // namespace cyclicurn
