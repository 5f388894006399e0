#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace talbot {

/// Raised when a fit has too little usable data to be meaningful.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fitted decay/regularity exponent with its fit diagnostics.
///
/// Two producers fill this:
///  - coefficient decay fits (|c_k| ~ |k|^-sigma): exponent = sigma,
///    critical_index = sigma - 1/2 (the implied Sobolev index), p = 2,
///    window = [k_lo, k_hi];
///  - dyadic block fits (||P_j u||_p ~ 2^{-s j}): exponent = critical_index = s,
///    window = [j_lo, j_hi], per-block log2 norms in `blocks`.
struct RegularityReport {
  double exponent = 0.0;
  double critical_index = 0.0;
  double p = 2.0;
  double r_squared = 0.0;
  long window_lo = 0;
  long window_hi = 0;
  std::size_t samples = 0;
  /// Coefficients vanish identically over the window (band-limited field).
  bool superpolynomial = false;
  std::vector<std::pair<int, double>> blocks;
};

}  // namespace talbot
