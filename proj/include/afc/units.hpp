#pragma once

#include <cmath>
#include <complex>

namespace afc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// External interfaces quote frequencies in Hz; everything internal is rad/s.
inline constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }
inline constexpr double rad_to_hz(double w) { return w / two_pi; }

inline double sech(double x) { return 1.0 / std::cosh(x); }

// arcsech(x) = ln(1/x + sqrt(1/x^2 - 1)), defined for 0 < x <= 1
inline double arcsech(double x) {
  const double inv = 1.0 / x;
  return std::log(inv + std::sqrt(inv * inv - 1.0));
}

}  // namespace afc
