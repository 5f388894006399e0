#pragma once

#include <cstdint>
#include <string>

namespace talbot {

/// The time t = 2*pi*p/q, held exactly as a coprime pair with q > 0.
class RationalTime {
 public:
  /// Throws std::invalid_argument unless q > 0 and gcd(|p|, q) = 1.
  RationalTime(std::int64_t p, std::int64_t q);

  /// Reduce p/q to lowest terms (sign carried by p).
  static RationalTime reduced(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  /// t / (2*pi) as a double.
  double turns() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  double seconds() const;

  /// (p * m) mod q in [0, q), without overflow for any int64 m.
  std::int64_t residue_times(std::int64_t m) const;

  std::string to_string() const { return std::to_string(p_) + "/" + std::to_string(q_); }

  friend bool operator==(const RationalTime&, const RationalTime&) = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

}  // namespace talbot
