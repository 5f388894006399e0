#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "talbot/grid.hpp"

namespace talbot {

using cplx = std::complex<double>;

/// Truncated Fourier series u(x) = sum_k c_k e^{ikx} on a GridSpec.
/// Coefficients are stored in FFT order (see GridSpec).
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(GridSpec grid);
  FourierField(GridSpec grid, std::vector<cplx> coeffs);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx coeff(std::int64_t k) const { return coeffs_[grid_.slot(k)]; }
  cplx& coeff(std::int64_t k) { return coeffs_[grid_.slot(k)]; }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  /// sum |c_k|^2 (the L^2 norm squared is 2*pi times this).
  double coeff_energy() const;
  double l2_norm() const;

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(cplx s);

 private:
  GridSpec grid_;
  std::vector<cplx> coeffs_ = std::vector<cplx>(8);
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(cplx s, FourierField a);

/// Samples at x_j = 2*pi*j/n.
class SpatialField {
 public:
  SpatialField() = default;
  explicit SpatialField(GridSpec grid);
  SpatialField(GridSpec grid, std::vector<cplx> samples);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }
  cplx operator[](std::size_t j) const { return samples_[j]; }
  cplx& operator[](std::size_t j) { return samples_[j]; }

  /// Riemann-sum L^2 norm with weight 2*pi/n.
  double l2_norm() const;

 private:
  GridSpec grid_;
  std::vector<cplx> samples_ = std::vector<cplx>(8);
};

/// c_k = (1/n) sum_j f(x_j) e^{-ik x_j}. Throws std::invalid_argument on
/// non-finite samples.
FourierField forward_transform(const SpatialField& f);

/// samples_j = sum_k c_k e^{ik x_j} on u's own grid.
SpatialField inverse_transform(const FourierField& u);

/// Evaluate on a finer grid (zero padding). A target coarser than u's grid is
/// rejected.
SpatialField inverse_transform(const FourierField& u, GridSpec target);

/// Copy the modes of u that exist on `target` (truncation or zero padding).
FourierField resample(const FourierField& u, GridSpec target);

}  // namespace talbot
