#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclicurn/residuals.hpp"

namespace cyclicurn {

inline constexpr const char* kVersion = "cyclicurn 1.0.0";

/// Thresholds used by the experiment commands.  All are echoed in reports.
struct Tolerances {
  double sigmas = 4.0;          ///< Monte Carlo z-score bound
  double rate_rel = 0.10;       ///< asymptotic-rate checks at the stated n
  double critical_rel = 0.15;   ///< lambda = 1/2 covariance, per eigendirection
  double mixed_ratio = 10.0;    ///< cross-residual measured/scale bound
  double oracle_abs = 1e-10;    ///< closed form vs enumeration
  double martingale_abs = 1e-12;
  double identity_abs = 1e-12;  ///< shift / recurrence in double mode
  double chi2_p = 1e-3;         ///< law checks by chi-square
  double mean_growth = 0.02;    ///< allowed fitted growth of the mean remainder ratio per doubling, relative

  /// Sets a field by name; throws ParameterError for unknown names.
  void set(const std::string& name, double value);
  nlohmann::ordered_json to_json() const;
};

struct ExperimentConfig {
  int m = 7;
  int initial_type = 0;
  std::uint64_t n = 10000;
  /// Martingale-limit horizons; the first is primary.  Empty means the
  /// command default (64 n for clt, 100 n for rate).
  std::vector<std::uint64_t> n_limits;
  std::size_t reps = 10000;
  std::uint64_t seed = 20140901;
  unsigned threads = 1;
  NormalizationMode mode = NormalizationMode::GammaRatio;
  std::vector<int> ks;  ///< target projections; empty = all applicable
  int m_min = 0;        ///< range commands (rank, oracle)
  std::uint64_t n_min = 0;
  bool exact_rational = false;
  bool history = false;  ///< simulate: keep every state
  Tolerances tol;

  nlohmann::ordered_json to_json() const;
};

/// Rows for CSV output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  bool pass = true;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  Table table;

  /// {config, results, diagnostics, version, command, pass}
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

Report cmd_simulate(const ExperimentConfig& config);
Report cmd_clt(const ExperimentConfig& config);
Report cmd_rate(const ExperimentConfig& config);
Report cmd_rank(const ExperimentConfig& config);
Report cmd_fixpoint(const ExperimentConfig& config);
Report cmd_oracle(const ExperimentConfig& config);
Report cmd_mean(const ExperimentConfig& config);

/// Compositions of every replicate at the given step indices (ascending).
/// Replicate r uses Rng::for_stream(seed, r).
std::vector<std::vector<Composition>> sample_compositions(const UrnParams& params,
                                                          const std::vector<std::uint64_t>& points,
                                                          std::size_t reps, std::uint64_t seed, unsigned threads);

/// Comparison of an empirical covariance with a limit matrix.
struct CovComparison {
  double max_abs_z = 0.0;         ///< max |C_hat - Sigma| / SE over entries
  double max_excess = 0.0;        ///< max (|C_hat - Sigma| - sigmas SE) / max|Sigma|
  double rel_frobenius = 0.0;     ///< ||C_hat - Sigma||_F / ||Sigma||_F
  std::vector<double> plane_eigen_ratio;  ///< eigenvalues of B^T C_hat B over those of B^T Sigma B
  bool within_sigmas = false;     ///< all |z| <= sigmas
  bool within_budget = false;     ///< all |C_hat - Sigma| <= sigmas SE + budget max|Sigma|
};

CovComparison compare_covariance(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& standard_error,
                                 const Eigen::MatrixXd& sigma, double sigmas, double budget,
                                 const Eigen::MatrixXd& plane_basis);

/// Dyadic grid lo, 2 lo, 4 lo, ... not exceeding hi, with hi appended.
/// Exact E[X_{n,k} X_{n,l}^T] from the mixed moments, for projections that
/// are not large (DomainError otherwise).
Eigen::MatrixXd exact_x_covariance(int m, std::uint64_t n, int k, int l);

std::vector<std::uint64_t> dyadic_grid(std::uint64_t lo, std::uint64_t hi);

}  // namespace cyclicurn
