#pragma once

#include <cstdint>
#include <vector>

#include "talbot/field.hpp"
#include "talbot/regularity.hpp"

namespace talbot {

/// Piecewise-constant 2*pi-periodic datum. Piece i covers
/// [breakpoints[i], breakpoints[i+1]); the last piece wraps around to
/// breakpoints[0] + 2*pi.
struct StepDataSpec {
  std::vector<double> breakpoints;
  std::vector<cplx> values;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// Sum of |value jumps| across all breakpoints (cyclically).
  double total_variation() const;

  /// Largest single jump.
  double max_jump() const;

  StepDataSpec scaled(cplx factor) const;

  /// Indicator of [0, pi), the canonical rough datum.
  static StepDataSpec half_indicator();
};

/// Exact Fourier coefficients of the step function truncated to the grid:
/// c_0 = mean, c_k = (1/(2 pi i k)) sum_pieces v (e^{-ik left} - e^{-ik right}).
FourierField synthesize_step(const StepDataSpec& spec, GridSpec grid);

/// Fit |c_k| ~ |k|^-sigma over the top two octaves below `cutoff`
/// (cutoff/4 <= |k| < cutoff; cutoff = 0 means n/2). Exactly vanishing
/// coefficients are skipped. If every coefficient in the window vanishes the
/// report carries the superpolynomial flag. Fewer than 64 nonzero modes in the
/// window raises InsufficientData.
RegularityReport certify_sobolev_class(const FourierField& u, std::int64_t cutoff = 0);

}  // namespace talbot
