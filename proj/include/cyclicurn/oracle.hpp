#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include "cyclicurn/spectral.hpp"
#include "cyclicurn/urn.hpp"

namespace cyclicurn {

using Rational = boost::multiprecision::cpp_rational;
using CompositionKey = std::vector<std::uint32_t>;

/// Exact law of R_n: composition -> probability, ordered lexicographically.
template <class P>
struct ExactDistT {
  int m = 0;
  int initial_type = 0;
  std::uint64_t n = 0;
  std::map<CompositionKey, P> pmf;

  P total() const {
    P acc = 0;
    for (const auto& [key, p] : pmf) acc += p;
    return acc;
  }
};

using ExactDist = ExactDistT<double>;
using RationalDist = ExactDistT<Rational>;

/// Enumeration guard: C(n+m, m-1) must not exceed this.
inline constexpr double kOracleSizeGuard = 1e7;
double lattice_size_bound(int m, std::uint64_t n);

/// Forward dynamic programme P_{s+1}(c + e_{i+1}) += P_s(c) c_i / (s+1).
/// Throws ResourceError when the size guard trips.
ExactDist exact_distribution(int m, int initial_type, std::uint64_t n);
RationalDist exact_distribution_rational(int m, int initial_type, std::uint64_t n);

ExactDist to_double(const RationalDist& dist);

struct DistMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

DistMoments dist_moments(const ExactDist& dist);
/// E[u_k(R_n)] and E[u_k(R_n) u_l(R_n)] by summation over the support.
cdouble expect_u(const ExactDist& dist, int k);
cdouble expect_uu(const ExactDist& dist, int k, int l);

struct IdentityCheck {
  bool exact = false;           ///< laws equal (bitwise in rational mode)
  double max_deviation = 0.0;   ///< max pointwise |difference| or TV distance
};

/// Law of R_n^{[j]} against the push-forward of the law of R_n^{[0]} under
/// j cyclic shifts.
IdentityCheck shift_check(int m, int j, std::uint64_t n, bool rational = false);

/// Total variation between the law of R_n and the mixture
/// (1/n) sum_i law(R_i) * law(R^t R'_{n-1-i}) (independent sum).
IdentityCheck recurrence_check(int m, std::uint64_t n, bool rational = false);

/// Grows a random binary search tree from one external node of type 0 by
/// replacing a uniformly chosen external node with an internal node whose
/// children carry labels (j, j+1 mod m); returns the external label counts.
Composition bst_simulate(int m, std::uint64_t n, std::uint64_t seed);

/// max over support states c at step n and k of
/// |E[M_{n+1,k} | R_n = c] - M_{n,k}(c)|, initial type 0.
double martingale_property_deviation(int m, std::uint64_t n);

/// {"m", "n", "initial_type", "exact", "pmf": {"c0,c1,...": p}} with p a
/// rational string in exact mode.
nlohmann::ordered_json to_json(const ExactDist& dist);
nlohmann::ordered_json to_json(const RationalDist& dist);

}  // namespace cyclicurn
