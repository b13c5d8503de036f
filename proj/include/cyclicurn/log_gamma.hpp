#pragma once

#include <complex>

namespace cyclicurn {

/// log Gamma(z) for complex z by the Lanczos approximation (g = 7, nine
/// coefficients), with the reflection formula for Re z < 1/2.  The
/// imaginary part is not continued across branch cuts; exponentiate when the
/// value itself is needed.  Relative accuracy is about 1e-15 for Re z >= 1/2.
std::complex<double> log_gamma(std::complex<double> z);

inline std::complex<double> gamma(std::complex<double> z) { return std::exp(log_gamma(z)); }

}  // namespace cyclicurn
