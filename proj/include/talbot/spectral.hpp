#pragma once

#include <limits>

#include "talbot/field.hpp"
#include "talbot/rational_time.hpp"

namespace talbot {

// Free Schrodinger flow for i u_t + u_xx = 0: c_k -> e^{-i k^2 t} c_k.
// Phases are reduced as k^2 * t/(2 pi) mod 1, so adding a full period 2 pi to
// t leaves the multiplier unchanged up to the rounding of t/(2 pi) itself.
FourierField linear_propagate(const FourierField& u, double t);

/// Same flow with t given in turns (t = 2*pi*turns).
FourierField linear_propagate_turns(const FourierField& u, double turns);

/// Exact-arithmetic flow at t = 2*pi*p/q: phase (p k^2 mod q)/q.
FourierField linear_propagate(const FourierField& u, const RationalTime& t);

/// <k> = sqrt(1 + k^2)
double japanese_bracket(double k);

/// sqrt(sum_k <k>^{2s} |c_k|^2) over the grid's modes.
double sobolev_norm(const FourierField& u, double s);

/// Largest dyadic block index whose block intersects the grid (log2(n) - 1).
int max_block_index(const GridSpec& grid);

struct LpBlock {
  FourierField field;
  bool outside_grid = false;
};

/// Sharp dyadic projection: |k| <= 1 for j = 0, 2^{j-1} < |k| <= 2^j for j >= 1.
LpBlock littlewood_paley_block(const FourierField& u, int j);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Riemann-sum L^p norm (weight 2*pi/n); p = kInfinity gives the max.
double lp_norm(const SpatialField& f, double p);

/// sup_j 2^{sj} ||P_j u||_{L^p} over j = 0..max_block_index.
double besov_seminorm(const FourierField& u, double s, double p);

}  // namespace talbot
