#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "talbot/grid.hpp"

namespace talbot {

/// Fractional part in [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

/// e^{2 pi i turns}, exact at quarter turns.
inline std::complex<double> unit_turn(double turns) {
  const double f = frac(turns);
  if (f == 0.0) return {1.0, 0.0};
  if (f == 0.25) return {0.0, 1.0};
  if (f == 0.5) return {-1.0, 0.0};
  if (f == 0.75) return {0.0, -1.0};
  return std::polar(1.0, kTwoPi * f);
}

/// frac(m * tau) for an integer m (|m| < 2^53), keeping the rounding error of
/// the product so that large m * tau does not lose the fractional part.
inline double frac_product(std::int64_t m, double tau) {
  const double a = static_cast<double>(m);
  const double t = frac(tau);
  const double hi = a * t;
  const double lo = std::fma(a, t, -hi);
  return frac((hi - std::floor(hi)) + lo);
}

}  // namespace talbot
