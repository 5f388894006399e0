#include "talbot/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "talbot/fft.hpp"

namespace talbot {
namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch (" + std::to_string(a.n_modes()) +
                                " vs " + std::to_string(b.n_modes()) + " modes)");
  }
}

}  // namespace

FourierField::FourierField(GridSpec grid) : grid_(grid), coeffs_(grid.n_modes()) {}

FourierField::FourierField(GridSpec grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.n_modes()) {
    throw std::invalid_argument("FourierField: expected " + std::to_string(grid_.n_modes()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

double FourierField::coeff_energy() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double FourierField::l2_norm() const { return std::sqrt(kTwoPi * coeff_energy()); }

FourierField& FourierField::operator+=(const FourierField& other) {
  require_same_grid(grid_, other.grid_, "FourierField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
  require_same_grid(grid_, other.grid_, "FourierField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(cplx s, FourierField a) { return a *= s; }

SpatialField::SpatialField(GridSpec grid) : grid_(grid), samples_(grid.n_modes()) {}

SpatialField::SpatialField(GridSpec grid, std::vector<cplx> samples) : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.n_modes()) {
    throw std::invalid_argument("SpatialField: expected " + std::to_string(grid_.n_modes()) + " samples, got " +
                                std::to_string(samples_.size()));
  }
}

double SpatialField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return std::sqrt(s * grid_.spacing());
}

FourierField forward_transform(const SpatialField& f) {
  const auto s = f.samples();
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!std::isfinite(s[j].real()) || !std::isfinite(s[j].imag())) {
      throw std::invalid_argument("forward_transform: non-finite sample at index " + std::to_string(j));
    }
  }
  std::vector<cplx> out(s.size());
  fft::execute(fft::Direction::forward, s, out);
  const double scale = 1.0 / static_cast<double>(s.size());
  for (auto& c : out) c *= scale;
  return FourierField(f.grid(), std::move(out));
}

SpatialField inverse_transform(const FourierField& u) { return inverse_transform(u, u.grid()); }

SpatialField inverse_transform(const FourierField& u, GridSpec target) {
  if (target.n_modes() < u.grid().n_modes()) {
    throw std::invalid_argument("inverse_transform: target grid (" + std::to_string(target.n_modes()) +
                                ") coarser than field grid (" + std::to_string(u.grid().n_modes()) + ")");
  }
  for (const auto& c : u.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("inverse_transform: non-finite coefficient");
    }
  }
  const FourierField padded = resample(u, target);
  std::vector<cplx> out(target.n_modes());
  fft::execute(fft::Direction::backward, padded.coeffs(), out);
  return SpatialField(target, std::move(out));
}

FourierField resample(const FourierField& u, GridSpec target) {
  FourierField out(target);
  const auto& g = u.grid();
  for (std::size_t i = 0; i < g.n_modes(); ++i) {
    const auto k = g.mode(i);
    if (target.contains(k)) out.coeff(k) = u.coeffs()[i];
  }
  return out;
}

}  // namespace talbot
