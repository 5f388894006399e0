#include "talbot/quantization.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "talbot/phase.hpp"

namespace talbot {

namespace {

std::int64_t mod(__int128 a, std::int64_t q) {
  auto r = static_cast<std::int64_t>(a % q);
  return r < 0 ? r + q : r;
}

cplx turn_of_residue(std::int64_t r, std::int64_t q) {
  return unit_turn(static_cast<double>(r) / static_cast<double>(q));
}

}  // namespace

cplx gauss_sum(std::int64_t p, std::int64_t q, std::int64_t m) {
  if (q <= 0) throw std::invalid_argument("gauss_sum: q must be positive, got " + std::to_string(q));
  if (std::gcd(p < 0 ? -p : p, q) != 1) {
    throw std::invalid_argument("gauss_sum: gcd(|p|, q) must be 1 for p = " + std::to_string(p) +
                                ", q = " + std::to_string(q));
  }
  cplx acc{};
  for (std::int64_t l = 0; l < q; ++l) {
    const __int128 e = -static_cast<__int128>(p) * l * l + static_cast<__int128>(m) * l;
    acc += turn_of_residue(mod(e, q), q);
  }
  return acc;
}

cplx TranslateCombination::multiplier(std::int64_t k) const {
  cplx acc{};
  for (std::int64_t m = 0; m < q; ++m) {
    acc += coefficients[static_cast<std::size_t>(m)] * turn_of_residue(mod(-static_cast<__int128>(k) * m, q), q);
  }
  return acc;
}

TranslateCombination quantization_coefficients(const RationalTime& rt, GaussOrientation orientation) {
  const std::int64_t p = orientation == GaussOrientation::matched ? rt.p() : -rt.p();
  TranslateCombination combo;
  combo.q = rt.q();
  combo.coefficients.assign(static_cast<std::size_t>(rt.q()), cplx{});
  const double inv_q = 1.0 / static_cast<double>(rt.q());
  for (std::int64_t m = 0; m < rt.q(); ++m) {
    combo.coefficients[static_cast<std::size_t>(m)] = gauss_sum(p, rt.q(), m) * inv_q;
  }
  return combo;
}

FourierField translate(const FourierField& g, std::int64_t m, std::int64_t q) {
  if (q <= 0) throw std::invalid_argument("translate: q must be positive");
  FourierField out = g;
  const auto& grid = g.grid();
  auto c = out.coeffs();
  for (std::size_t s = 0; s < c.size(); ++s) {
    c[s] *= turn_of_residue(mod(-static_cast<__int128>(grid.mode(s)) * m, q), q);
  }
  return out;
}

FourierField quantized_evolution(const FourierField& g, const TranslateCombination& combo) {
  if (combo.q <= 0 || combo.coefficients.size() != static_cast<std::size_t>(combo.q)) {
    throw std::invalid_argument("quantized_evolution: coefficient count must equal q");
  }
  FourierField out(g.grid());
  for (std::int64_t m = 0; m < combo.q; ++m) {
    const cplx a = combo.coefficients[static_cast<std::size_t>(m)];
    if (a == cplx{}) continue;
    out += a * translate(g, m, combo.q);
  }
  return out;
}

FourierField quantized_evolution(const FourierField& g, const RationalTime& rt) {
  return quantized_evolution(g, quantization_coefficients(rt));
}

}  // namespace talbot
