#include <doctest.h>

#include <numbers>

#include "cyclicurn/log_gamma.hpp"

using namespace cyclicurn;
using C = std::complex<double>;

namespace {
double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gamma at real points") {
  CHECK(rel(gamma(C(1.0)), C(1.0)) < 1e-14);
  CHECK(rel(gamma(C(5.0)), C(24.0)) < 1e-14);
  CHECK(rel(gamma(C(0.5)), C(std::sqrt(std::numbers::pi))) < 1e-14);
  for (double x : {0.1, 0.7, 2.5, 11.3, 40.0}) CHECK(rel(gamma(C(x)), C(std::tgamma(x))) < 1e-13);
}

TEST_CASE("gamma at complex points against mpmath") {
  // mpmath at 40 digits
  CHECK(rel(gamma(C(1.0, 1.0)), C(0.498015668118356042713691117462198, -0.154949828301810685124955130483887)) < 1e-14);
  CHECK(rel(gamma(C(0.3, -2.0)), C(0.0574653375695880334598999936646521, 0.0749849125826461381758161169924270)) < 1e-13);
  CHECK(rel(gamma(C(-1.5, 0.5)), C(0.937916662787885050967336979630850, 0.349205668147804868594080383739900)) < 1e-13);
  const C w7 = std::polar(1.0, 2 * std::numbers::pi / 7);
  CHECK(rel(gamma(1.0 + w7), C(0.693724095311084783759885847996913, 0.114194022097517896898711333253978)) < 1e-14);
}

TEST_CASE("reflection and recurrence hold") {
  for (C z : {C(0.2, 0.3), C(-2.3, 1.1), C(3.0, -4.0)}) {
    CHECK(rel(gamma(z + 1.0), z * gamma(z)) < 1e-12);
    CHECK(rel(gamma(std::conj(z)), std::conj(gamma(z))) < 1e-13);
  }
  // |Gamma(1 + i)|^2 = pi / sinh(pi)
  CHECK(std::abs(std::norm(gamma(C(1.0, 1.0))) - std::numbers::pi / std::sinh(std::numbers::pi)) < 1e-14);
}
