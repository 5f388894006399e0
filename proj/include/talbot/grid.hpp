#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace talbot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform discretization of the torus R/2piZ.
///
/// Modes run over {-n/2, ..., n/2 - 1}; sample points are x_j = 2*pi*j/n.
/// Storage everywhere in the library uses FFT order: slot i holds mode i for
/// i < n/2 and mode i - n otherwise.
class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(std::size_t n_modes) : n_(n_modes) {
    if (n_modes < 8 || (n_modes & (n_modes - 1)) != 0) {
      throw std::invalid_argument("GridSpec: n_modes must be a power of two >= 8, got " +
                                  std::to_string(n_modes));
    }
  }

  std::size_t n_modes() const { return n_; }
  double domain_length() const { return kTwoPi; }
  double spacing() const { return kTwoPi / static_cast<double>(n_); }

  std::int64_t min_mode() const { return -static_cast<std::int64_t>(n_ / 2); }
  std::int64_t max_mode() const { return static_cast<std::int64_t>(n_ / 2) - 1; }
  bool contains(std::int64_t k) const { return k >= min_mode() && k <= max_mode(); }

  std::int64_t mode(std::size_t slot) const {
    const auto i = static_cast<std::int64_t>(slot);
    return slot < n_ / 2 ? i : i - static_cast<std::int64_t>(n_);
  }
  std::size_t slot(std::int64_t k) const {
    if (!contains(k)) {
      throw std::out_of_range("GridSpec: mode " + std::to_string(k) + " outside grid of " +
                              std::to_string(n_) + " modes");
    }
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<std::int64_t>(n_));
  }
  double x(std::size_t j) const { return spacing() * static_cast<double>(j); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t n_ = 8;
};

}  // namespace talbot
