#include "talbot/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "talbot/phase.hpp"

namespace talbot {

FourierField linear_propagate(const FourierField& u, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("linear_propagate: non-finite time");
  return linear_propagate_turns(u, t / kTwoPi);
}

FourierField linear_propagate_turns(const FourierField& u, double turns) {
  if (!std::isfinite(turns)) throw std::invalid_argument("linear_propagate: non-finite time");
  FourierField out(u.grid());
  const auto& g = u.grid();
  auto in = u.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto k = g.mode(i);
    dst[i] = in[i] * unit_turn(-frac_product(k * k, turns));
  }
  return out;
}

FourierField linear_propagate(const FourierField& u, const RationalTime& t) {
  FourierField out(u.grid());
  const auto& g = u.grid();
  auto in = u.coeffs();
  auto dst = out.coeffs();
  const double q = static_cast<double>(t.q());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto k = g.mode(i);
    const auto r = t.residue_times(k * k);
    dst[i] = in[i] * unit_turn(-static_cast<double>(r) / q);
  }
  return out;
}

double japanese_bracket(double k) { return std::sqrt(1.0 + k * k); }

double sobolev_norm(const FourierField& u, double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("sobolev_norm: non-finite s");
  const auto& g = u.grid();
  double sum = 0.0;
  auto c = u.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(g.mode(i));
    sum += std::pow(1.0 + k * k, s) * std::norm(c[i]);
  }
  return std::sqrt(sum);
}

int max_block_index(const GridSpec& grid) { return std::bit_width(grid.n_modes()) - 2; }

LpBlock littlewood_paley_block(const FourierField& u, int j) {
  if (j < 0) throw std::invalid_argument("littlewood_paley_block: negative block index");
  LpBlock block{FourierField(u.grid()), false};
  if (j > max_block_index(u.grid())) {
    block.outside_grid = true;
    return block;
  }
  const std::int64_t hi = j == 0 ? 1 : (std::int64_t{1} << j);
  const std::int64_t lo = j == 0 ? -1 : (std::int64_t{1} << (j - 1));
  const auto& g = u.grid();
  auto src = u.coeffs();
  auto dst = block.field.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto a = std::abs(g.mode(i));
    if (a > lo && a <= hi) dst[i] = src[i];
  }
  return block;
}

double lp_norm(const SpatialField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  auto s = f.samples();
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : s) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (const auto& v : s) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid().spacing(), 1.0 / p);
}

double besov_seminorm(const FourierField& u, double s, double p) {
  double best = 0.0;
  for (int j = 0; j <= max_block_index(u.grid()); ++j) {
    const auto block = littlewood_paley_block(u, j);
    const double norm = lp_norm(inverse_transform(block.field), p);
    best = std::max(best, std::exp2(s * j) * norm);
  }
  return best;
}

}  // namespace talbot
