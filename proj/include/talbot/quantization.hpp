#pragma once

#include <cstdint>
#include <vector>

#include "talbot/field.hpp"
#include "talbot/rational_time.hpp"

namespace talbot {

/// G(p, q, m) = sum_{l=0}^{q-1} e^{2 pi i (-p l^2 + m l)/q}, with the phase
/// reduced mod q in integer arithmetic. Throws unless q > 0 and gcd(|p|, q) = 1.
cplx gauss_sum(std::int64_t p, std::int64_t q, std::int64_t m);

/// e^{-i k^2 t} at t = 2 pi p/q as sum_m a_m e^{-2 pi i k m/q}.
struct TranslateCombination {
  std::int64_t q = 1;
  std::vector<cplx> coefficients{cplx{1.0, 0.0}};

  /// sum_m a_m e^{-2 pi i k m / q}
  cplx multiplier(std::int64_t k) const;
};

/// `matched` inverts the propagator's own multiplier. `mirror` uses the
/// opposite quadratic sign and reproduces the backward flow instead.
enum class GaussOrientation { matched, mirror };

/// a_m = G(p, q, m) / q (or the mirror with p -> -p).
TranslateCombination quantization_coefficients(const RationalTime& rt,
                                               GaussOrientation orientation = GaussOrientation::matched);

/// c_k -> e^{-2 pi i k m / q} c_k, i.e. u(x) -> u(x - 2 pi m / q).
FourierField translate(const FourierField& g, std::int64_t m, std::int64_t q);

/// sum_m a_m g(x - 2 pi m / q).
FourierField quantized_evolution(const FourierField& g, const TranslateCombination& combo);
FourierField quantized_evolution(const FourierField& g, const RationalTime& rt);

}  // namespace talbot
