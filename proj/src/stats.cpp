#include "cyclicurn/stats.hpp"

#include <cmath>

#include "cyclicurn/errors.hpp"

namespace cyclicurn {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

Eigen::VectorXd column_means(const Eigen::MatrixXd& samples) {
  const Eigen::Index r = samples.rows();
  Eigen::VectorXd mean(samples.cols());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < r; ++i) s.add(samples(i, j));
    mean[j] = s.value() / static_cast<double>(r);
  }
  return mean;
}

}  // namespace

CovEstimate estimate_covariance(const Eigen::MatrixXd& samples) {
  const Eigen::Index r = samples.rows();
  const Eigen::Index d = samples.cols();
  if (r < 3) throw ParameterError("estimate_covariance: need at least 3 samples");
  CovEstimate out;
  out.count = static_cast<std::size_t>(r);
  out.mean = column_means(samples);
  const Eigen::MatrixXd centered = samples.rowwise() - out.mean.transpose();
  out.covariance.resize(d, d);
  out.standard_error.resize(d, d);
  const double rd = static_cast<double>(r);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      CompensatedSum s;
      for (Eigen::Index i = 0; i < r; ++i) s.add(centered(i, a) * centered(i, b));
      const double c = s.value() / (rd - 1.0);
      const double mean_prod = s.value() / rd;
      CompensatedSum v;
      for (Eigen::Index i = 0; i < r; ++i) {
        const double e = centered(i, a) * centered(i, b) - mean_prod;
        v.add(e * e);
      }
      const double se = std::sqrt(v.value() / (rd - 1.0) / rd);
      out.covariance(a, b) = out.covariance(b, a) = c;
      out.standard_error(a, b) = out.standard_error(b, a) = se;
    }
  }
  return out;
}

Eigen::MatrixXd cross_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw ParameterError("cross_correlation: sample counts differ");
  Eigen::MatrixXd joined(a.rows(), a.cols() + b.cols());
  joined << a, b;
  const CovEstimate est = estimate_covariance(joined);
  Eigen::MatrixXd out(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const Eigen::Index jj = a.cols() + j;
      const double denom = std::sqrt(est.covariance(i, i) * est.covariance(jj, jj));
      out(i, j) = denom > 0.0 ? est.covariance(i, jj) / denom : 0.0;
    }
  }
  return out;
}

MeanEstimate estimate_mean(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("estimate_mean: need at least 2 samples");
  const double r = static_cast<double>(x.size());
  CompensatedSum s;
  for (double v : x) s.add(v);
  const double mean = s.value() / r;
  CompensatedSum q;
  for (double v : x) q.add((v - mean) * (v - mean));
  return {mean, std::sqrt(q.value() / (r - 1.0) / r)};
}

NormalityDiagnostic normality_diagnostic(std::span<const double> x, double sigmas) {
  if (x.size() < 4) throw ParameterError("normality_diagnostic: need at least 4 samples");
  const double r = static_cast<double>(x.size());
  CompensatedSum s;
  for (double v : x) s.add(v);
  const double mean = s.value() / r;
  CompensatedSum m2, m3, m4;
  for (double v : x) {
    const double d = v - mean;
    m2.add(d * d);
    m3.add(d * d * d);
    m4.add(d * d * d * d);
  }
  const double var = m2.value() / r;
  NormalityDiagnostic out;
  out.skewness = (m3.value() / r) / std::pow(var, 1.5);
  out.excess_kurtosis = (m4.value() / r) / (var * var) - 3.0;
  out.skewness_threshold = sigmas * std::sqrt(6.0 / r);
  out.kurtosis_threshold = sigmas * std::sqrt(24.0 / r);
  out.pass = std::abs(out.skewness) <= out.skewness_threshold &&
             std::abs(out.excess_kurtosis) <= out.kurtosis_threshold;
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw ParameterError("linear_fit: need >= 3 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    sse += e * e;
  }
  fit.slope_standard_error = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

}  // namespace cyclicurn
