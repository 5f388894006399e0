#pragma once

#include <cstdint>

#include "talbot/field.hpp"

namespace talbot {

/// sum_{1 <= |n| <= |k|} |n|^-beta, with phi_beta(0) = 1.
double phi_beta(std::int64_t k, double beta);

struct PhiGrowth {
  /// max(raw_slope, 0)
  double exponent = 0.0;
  double raw_slope = 0.0;
  double r_squared = 0.0;
};

/// Growth exponent of phi_beta on [k_lo, k_hi], fitted from the dyadic
/// increments phi(2k) - phi(k) ~ k^{1 - beta} at k = k_lo, 2 k_lo, ... < k_hi.
PhiGrowth phi_growth_exponent(double beta, std::int64_t k_lo = 64, std::int64_t k_hi = 4096);

/// sum_{|n| <= n_max} <n - k1>^-beta <n - k2>^-gamma
double lemma1_lhs(std::int64_t k1, std::int64_t k2, double beta, double gamma, std::int64_t n_max);

/// <k1 - k2>^-gamma phi_beta(k1 - k2)
double lemma1_rhs(std::int64_t k1, std::int64_t k2, double beta, double gamma);

struct LemmaScanResult {
  double beta = 0.0;
  double gamma = 0.0;
  std::int64_t k_range = 0;
  double sup_ratio = 0.0;
  std::int64_t argmax_k1 = 0;
  std::int64_t argmax_k2 = 0;
  /// The LHS is summed over |n| <= n_max = 8 k_range.
  std::int64_t n_max = 0;
  /// Bound on the omitted part of any LHS.
  double tail_bound = 0.0;
  /// tail_bound divided by the smallest RHS: bounds the truncation error of sup_ratio.
  double ratio_uncertainty = 0.0;
};

/// sup of LHS / RHS over |k1|, |k2| <= k_range. Requires beta >= gamma >= 0,
/// beta + gamma > 1 and k_range >= 1.
LemmaScanResult lemma1_ratio_scan(double beta, double gamma, std::int64_t k_range);

using PicardField = FourierField;

/// Index convention for the trilinear sum.
///  - duhamel: k = k1 - k2 + k3 with the middle factor conj(g_{k2}), phase
///    2 (k1 - k2)(k3 - k2), resonant when k1 = k2 or k3 = k2;
///  - pair_sum: k = k1 + k2 + k3 with middle factor conj(g_{-k2}), phase
///    2 (k1 + k2)(k2 + k3), resonant when k1 + k2 = 0 or k2 + k3 = 0.
enum class PicardIndexing { duhamel, pair_sum };

struct PicardOptions {
  PicardIndexing indexing = PicardIndexing::duhamel;
  /// Add the diagonal term -i t |g_k|^2 g_k left after removing e^{iPt}.
  bool include_diagonal = true;
  /// Use g_{k2} (or g_{-k2}) without conjugation.
  bool unconjugated_middle = false;
  /// Use e^{-i Phi t} in place of e^{+i Phi t}.
  bool reversed_phase = false;
};

/// First Picard iterate of the remainder u(t) - e^{iPt} e^{it d_xx} g at unit
/// amplitude: e^{it d_xx} [ sum_nonres g g* g (e^{i Phi t} - 1) / Phi - i t |g_k|^2 g_k ].
/// The remainder of eps g is eps^3 times this to leading order. n_modes <= 512.
PicardField picard_iterate(const FourierField& g, double t, const PicardOptions& options = {});

}  // namespace talbot
