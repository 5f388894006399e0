#include "talbot/rational_time.hpp"

#include <numeric>
#include <stdexcept>

#include "talbot/grid.hpp"

namespace talbot {

RationalTime::RationalTime(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (q <= 0) throw std::invalid_argument("RationalTime: q must be positive, got " + std::to_string(q));
  if (std::gcd(p < 0 ? -p : p, q) != 1) {
    throw std::invalid_argument("RationalTime: " + std::to_string(p) + "/" + std::to_string(q) +
                                " is not in lowest terms");
  }
}

RationalTime RationalTime::reduced(std::int64_t p, std::int64_t q) {
  if (q == 0) throw std::invalid_argument("RationalTime: zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  return RationalTime(p / g, q / g);
}

double RationalTime::seconds() const { return kTwoPi * turns(); }

std::int64_t RationalTime::residue_times(std::int64_t m) const {
  const auto prod = static_cast<__int128>(p_) * static_cast<__int128>(m);
  auto r = static_cast<std::int64_t>(prod % q_);
  return r < 0 ? r + q_ : r;
}

}  // namespace talbot
