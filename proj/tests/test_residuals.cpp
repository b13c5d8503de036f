#include <doctest.h>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/limits.hpp"
#include "cyclicurn/residuals.hpp"

using namespace cyclicurn;

TEST_CASE("centering table matches the exact moments") {
  const UrnParams params{7, 2};
  const CenteringTable t(params, 321);
  for (int k = 0; k < 7; ++k) {
    CHECK(std::abs(t.mean_u(k) - mean_u(321, 7, k, 2)) < 1e-12);
    if (k > 0) CHECK(std::abs(t.scale(k) - martingale_scale(321, 7, k)) < 1e-14);
  }
  const std::uint64_t cps[] = {5, 321};
  const auto along = CenteringTable::along(params, cps);
  CHECK(along[1].n() == 321);
  CHECK(std::abs(along[1].growth(1) - t.growth(1)) < 1e-12);
}

TEST_CASE("incremental tracking agrees with direct evaluation after 1e5 draws") {
  for (int m : {7, 8, 12}) {
    const UrnParams params{m, 1};
    UrnProcess urn(params);
    MartingaleTrack track = track_init(params);
    Rng rng(2024);
    for (int i = 0; i < 100000; ++i) track.step(urn.step(rng));
    const CenteringTable table(params, urn.n());
    const MartingaleTrack direct = MartingaleTrack::from_counts(urn.state(), table);
    REQUIRE(track.n() == direct.n());
    for (int k = 0; k < m; ++k) {
      CHECK(std::abs(track.u()[k] - direct.u()[k]) < 1e-9 * 1e5);
      CHECK(std::abs(track.M()[k] - direct.M()[k]) < 1e-9 * (1.0 + std::abs(direct.M()[k])));
      CHECK(std::abs(direct.M()[k] - martingale_value(urn.state(), k, table)) < 1e-12 * (1.0 + std::abs(direct.M()[k])));
    }
  }
}

TEST_CASE("functional track_step leaves the input untouched") {
  const UrnParams params{5, 0};
  const MartingaleTrack a = track_init(params);
  const MartingaleTrack b = track_step(a, 0);
  CHECK(a.n() == 0);
  CHECK(b.n() == 1);
  CHECK(std::abs(b.u()[1] - (1.0 + root_of_unity(1, 5))) < 1e-15);
}

TEST_CASE("statistics need a limit for large projections") {
  const UrnParams params{7, 0};
  UrnProcess urn(params);
  Rng rng(1);
  urn.advance_to(1000, rng);
  const auto track = MartingaleTrack::from_counts(urn.state(), CenteringTable(params, 1000));
  CHECK_THROWS_AS((x_statistic(track, {}, 1, NormalizationMode::GammaRatio)), ParameterError);
  XiMap xi{{1, xi_estimate(track, 1)}};
  // with Xi = M_n the gamma-ratio residual is zero
  CHECK(x_statistic(track, xi, 1, NormalizationMode::GammaRatio).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((x_statistic(track, {}, 2, NormalizationMode::GammaRatio).size() == 7));
  CHECK_THROWS_AS((x_statistic(track, {}, 4, NormalizationMode::GammaRatio)), ParameterError);
  const auto sample = fluctuation_sample(track, xi, NormalizationMode::PowerPhase);
  CHECK(sample.X.size() == 3);
  CHECK(parse_mode("power_phase") == NormalizationMode::PowerPhase);
  CHECK(mode_name(NormalizationMode::GammaRatio) == "gamma_ratio");
  CHECK_THROWS_AS(parse_mode("other"), ParameterError);
}

TEST_CASE("pi residual reduces to the centered projection without a limit") {
  const UrnParams params{9, 0};
  UrnProcess urn(params);
  Rng rng(8);
  urn.advance_to(5000, rng);
  const auto track = MartingaleTrack::from_counts(urn.state(), CenteringTable(params, 5000));
  const auto pi = pi_residual(track, std::nullopt, 3);
  CHECK(std::abs(dft_coordinate(pi, 3) - track.centered(3)) < 1e-9);
}

TEST_CASE("projection bases are orthonormal and span the eigenplane") {
  for (int m : {7, 12}) {
    for (int k = 1; k <= m / 2; ++k) {
      const auto b = projection_basis(m, k);
      CHECK(b.cols() == (2 * k == m ? 1 : 2));
      CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() < 1e-14);
      const auto s = sigma_k(m, k).entries();
      CHECK((b * (b.transpose() * s * b) * b.transpose() - s).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}
