#include <doctest.h>

#include "cyclicurn/errors.hpp"
#include "cyclicurn/urn.hpp"

using namespace cyclicurn;

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS((UrnParams{1, 0}.validate()), ParameterError);
  CHECK_THROWS_AS((UrnParams{4, 4}.validate()), ParameterError);
  CHECK_THROWS_AS((UrnParams{4, -1}.validate()), ParameterError);
  CHECK_NOTHROW((UrnParams{2, 1}.validate()));
}

TEST_CASE("replacement matrix is the cyclic shift") {
  const auto r = replacement_matrix(4);
  Eigen::MatrixXi expected(4, 4);
  expected << 0, 1, 0, 0,  //
      0, 0, 1, 0,          //
      0, 0, 0, 1,          //
      1, 0, 0, 0;
  CHECK(r == expected);
  CHECK(r.rowwise().sum().isOnes());
}

TEST_CASE("ball_type walks the cumulative counts") {
  const Composition c{{2, 0, 1}, 2};
  CHECK(ball_type(c, 0) == 0);
  CHECK(ball_type(c, 1) == 0);
  CHECK(ball_type(c, 2) == 2);
  CHECK_THROWS_AS(ball_type(c, 3), ParameterError);
}

TEST_CASE("after_draw adds the successor type") {
  const Composition c{{1, 1, 0}, 1};
  CHECK((after_draw(c, 0) == Composition{{1, 2, 0}, 2}));
  CHECK((after_draw(c, 2) == Composition{{2, 1, 0}, 2}));
}

TEST_CASE("conditional mean of a small state") {
  const Composition c{{1, 1, 0}, 1};
  const Eigen::VectorXd mean = conditional_mean(c);
  CHECK(mean[0] == doctest::Approx(1.0));
  CHECK(mean[1] == doctest::Approx(1.5));
  CHECK(mean[2] == doctest::Approx(0.5));
}

TEST_CASE("trajectory invariants") {
  for (int m : {2, 5, 7, 12}) {
    const auto t = simulate(UrnParams{m, 1}, 500, 9, true);
    REQUIRE(t.states.size() == 501);
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      const auto& s = t.states[i];
      std::uint64_t total = 0;
      for (auto c : s.counts) total += c;
      REQUIRE(s.n == i);
      REQUIRE(total == s.n + 1);
      if (i > 0) {
        // exactly one coordinate grew by one
        int grown = 0;
        for (int k = 0; k < m; ++k) {
          REQUIRE(s.counts[k] >= t.states[i - 1].counts[k]);
          grown += static_cast<int>(s.counts[k] - t.states[i - 1].counts[k]);
        }
        REQUIRE(grown == 1);
      }
    }
    CHECK(t.final_state == t.states.back());
  }
}

TEST_CASE("simulate is reproducible from the seed") {
  const auto a = simulate(UrnParams{7, 0}, 10000, 31);
  const auto b = simulate(UrnParams{7, 0}, 10000, 31);
  const auto c = simulate(UrnParams{7, 0}, 10000, 32);
  CHECK(a.final_state == b.final_state);
  CHECK(a.final_state != c.final_state);
  CHECK(a.states.empty());
}
