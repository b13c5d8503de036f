#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cyclicurn {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Sample estimate of a covariance matrix.  Rows of the input are
/// replicates, columns are coordinates.
struct CovEstimate {
  std::size_t count = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;      ///< unbiased
  Eigen::MatrixXd standard_error;  ///< per entry, from fourth moments
};

CovEstimate estimate_covariance(const Eigen::MatrixXd& samples);

/// Sample cross-correlation between the columns of a and of b.
Eigen::MatrixXd cross_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanEstimate estimate_mean(std::span<const double> x);

/// Standardized skewness and excess kurtosis with thresholds
/// sigmas * sqrt(6/R) and sigmas * sqrt(24/R).
struct NormalityDiagnostic {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double skewness_threshold = 0.0;
  double kurtosis_threshold = 0.0;
  bool pass = false;
};

NormalityDiagnostic normality_diagnostic(std::span<const double> x, double sigmas = 4.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_standard_error = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace cyclicurn
