#include <doctest.h>

#include <random>

#include "cyclicurn/rng.hpp"
#include "cyclicurn/stats.hpp"

using namespace cyclicurn;

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("covariance of a tiny sample") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 2,  //
      2, 4,   //
      3, 6,   //
      4, 8;
  const auto e = estimate_covariance(x);
  CHECK(e.count == 4);
  CHECK(e.mean[0] == doctest::Approx(2.5));
  CHECK(e.covariance(0, 0) == doctest::Approx(5.0 / 3.0));
  CHECK(e.covariance(0, 1) == doctest::Approx(10.0 / 3.0));
  CHECK(e.covariance(1, 1) == doctest::Approx(20.0 / 3.0));
  CHECK(e.standard_error.minCoeff() > 0.0);
}

TEST_CASE("standard errors are calibrated for normal data") {
  Rng rng(3);
  std::normal_distribution<double> normal;
  constexpr int kR = 20000;
  Eigen::MatrixXd x(kR, 2);
  for (int i = 0; i < kR; ++i) {
    const double a = normal(rng.engine()), b = normal(rng.engine());
    x(i, 0) = a;
    x(i, 1) = 0.5 * a + b;
  }
  const auto e = estimate_covariance(x);
  // Var(S_11) = 2 / R, Var(S_12) = (1 + 0.25 + 0.25) / R
  CHECK(e.standard_error(0, 0) == doctest::Approx(std::sqrt(2.0 / kR)).epsilon(0.05));
  CHECK(e.standard_error(0, 1) == doctest::Approx(std::sqrt(1.5 / kR)).epsilon(0.05));
  CHECK(std::abs(e.covariance(0, 1) - 0.5) < 4 * e.standard_error(0, 1));
  const auto corr = cross_correlation(x.col(0), x.col(1));
  CHECK(corr(0, 0) == doctest::Approx(0.5 / std::sqrt(1.25)).epsilon(0.03));

  std::vector<double> col(x.col(0).data(), x.col(0).data() + kR);
  CHECK(normality_diagnostic(col).pass);
  std::exponential_distribution<double> expo;
  for (auto& v : col) v = expo(rng.engine());
  const auto bad = normality_diagnostic(col);
  CHECK_FALSE(bad.pass);
  CHECK(bad.skewness == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("mean and linear fit") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto m = estimate_mean(v);
  CHECK(m.mean == doctest::Approx(3.0));
  CHECK(m.standard_error == doctest::Approx(std::sqrt(2.5 / 5)));
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_standard_error == doctest::Approx(0.0).scale(1.0));
}
