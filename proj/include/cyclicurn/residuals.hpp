#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cyclicurn/exact_moments.hpp"
#include "cyclicurn/spectral.hpp"
#include "cyclicurn/urn.hpp"

namespace cyclicurn {

/// Exact centering and martingale normalization of every coordinate at one
/// step index: E[u_k(R_n)], gamma_ratio(n, omega^k) and c_{n,k}.
class CenteringTable {
 public:
  CenteringTable(const UrnParams& params, std::uint64_t n);

  /// One table per checkpoint, computed in a single pass per coordinate.
  static std::vector<CenteringTable> along(const UrnParams& params, std::span<const std::uint64_t> checkpoints);

  const UrnParams& params() const noexcept { return params_; }
  std::uint64_t n() const noexcept { return n_; }
  int m() const noexcept { return params_.m; }
  cdouble mean_u(int k) const { return mean_u_[k]; }
  const LogPolarComplex& ratio(int k) const { return ratio_[k]; }
  /// Gamma(n+1)/Gamma(n+1+omega^k), or n for k = m/2.
  cdouble scale(int k) const { return scale_[k]; }
  /// Gamma(n+1+omega^k)/Gamma(n+1) = 1/scale (unused for k = m/2).
  cdouble growth(int k) const { return growth_[k]; }

 private:
  CenteringTable() = default;
  UrnParams params_;
  std::uint64_t n_ = 0;
  std::vector<cdouble> mean_u_;
  std::vector<LogPolarComplex> ratio_;
  std::vector<cdouble> scale_;
  std::vector<cdouble> growth_;
};

/// Running spectral coordinates u_k(R_n), gamma ratios and the centered
/// martingales M_{n,k} = Gamma(n+1)/Gamma(n+1+omega^k) * u_k(R_n - E R_n)
/// (and M_{n,m/2} = n u_{m/2}(R_n - E R_n)).
class MartingaleTrack {
 public:
  explicit MartingaleTrack(const UrnParams& params);

  /// Track state at the composition, using exact moments from `table`
  /// (which must be for the same params and step index).
  static MartingaleTrack from_counts(const Composition& state, const CenteringTable& table);

  int m() const noexcept { return params_.m; }
  std::uint64_t n() const noexcept { return n_; }
  const UrnParams& params() const noexcept { return params_; }
  const Eigen::VectorXcd& u() const noexcept { return u_; }
  const Eigen::VectorXcd& M() const noexcept { return M_; }
  const std::vector<LogPolarComplex>& ratio() const noexcept { return ratio_; }

  /// Centered coordinate u_k(R_n) - E[u_k(R_n)].
  cdouble centered(int k) const;
  /// Gamma(n+1+omega^k)/Gamma(n+1).
  cdouble growth(int k) const;

  /// Advances by one draw of `drawn_type` in O(m).
  void step(int drawn_type);

 private:
  MartingaleTrack() = default;
  void refresh_martingales();

  UrnParams params_;
  std::uint64_t n_ = 0;
  Eigen::VectorXcd u_;
  Eigen::VectorXcd M_;
  std::vector<LogPolarComplex> ratio_;
  std::vector<cdouble> gamma_root_;  // Gamma(1 + omega^k)
};

MartingaleTrack track_init(const UrnParams& params);
MartingaleTrack track_step(MartingaleTrack track, int drawn_type);

/// M_{n,k} of a composition (exact moments from `table`).
cdouble martingale_value(const Composition& state, int k, const CenteringTable& table);

/// Approximation of the martingale limit Xi_k by M_{N,k}.  Its squared L2
/// bias is E|M_{N,k} - Xi_k|^2 ~ N^{1-2 lambda_k}/(2 lambda_k - 1).
struct XiEstimate {
  int k = 0;
  std::uint64_t n_limit = 0;
  cdouble value;
};

using XiMap = std::map<int, XiEstimate>;

/// Requires lambda_k > 1/2 (DomainError otherwise).
XiEstimate xi_estimate(const MartingaleTrack& track, int k);

/// Pi_{n,k}: growth_k (M_{n,k} - Xi_k) v_k for large projections,
/// u_k(R_n - E R_n) v_k otherwise.  A large k without `xi` is an error.
Eigen::VectorXcd pi_residual(const MartingaleTrack& track, const std::optional<XiEstimate>& xi, int k);

enum class NormalizationMode { GammaRatio, PowerPhase };

std::string_view mode_name(NormalizationMode mode);
NormalizationMode parse_mode(std::string_view name);

/// X_{n,k} for 1 <= k <= floor(m/2):
///   large:       n^{-1/2} (centered pair projection - 2 Re(G Xi_k v_k)),
///                G = Gamma(n+1+omega^k)/Gamma(n+1) (GammaRatio) or n^{omega^k} (PowerPhase)
///   small, m/2:  n^{-1/2} (pi_k + pi_{m-k})(R_n - E R_n)
///   lambda=1/2:  (n log n)^{-1/2} (pi_k + pi_{m-k})(R_n - E R_n)
Eigen::VectorXd x_statistic(const MartingaleTrack& track, const XiMap& xi, int k, NormalizationMode mode);

/// X_{n,k} for every k in 1..floor(m/2).
struct FluctuationSample {
  int m = 0;
  std::uint64_t n = 0;
  NormalizationMode mode = NormalizationMode::GammaRatio;
  std::map<int, Eigen::VectorXd> X;
};

FluctuationSample fluctuation_sample(const MartingaleTrack& track, const XiMap& xi, NormalizationMode mode);

/// Orthonormal basis (columns) of the real plane span{Re v_k, Im v_k}, or
/// the line span{v_{m/2}} for k = m/2.
Eigen::MatrixXd projection_basis(int m, int k);

}  // namespace cyclicurn
