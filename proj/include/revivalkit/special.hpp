#pragma once

#include <complex>

namespace revivalkit {

// Principal-branch-continuous log Gamma for Re z > 0. The imaginary part is
// continuous along vertical lines, which is what arg Gamma(1/2 + iy) needs.
std::complex<double> log_gamma(std::complex<double> z);

// Polygamma functions psi^(n)(z) for n = 0, 1, 2 and Re z > 0.
std::complex<double> polygamma(int n, std::complex<double> z);

inline std::complex<double> digamma(std::complex<double> z) { return polygamma(0, z); }

// arg Gamma(1/2 + iy) on the continuous branch through 0 at y = 0.
double arg_gamma_half(double y);

}  // namespace revivalkit
