#include "talbot/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "talbot/fit.hpp"
#include "talbot/spectral.hpp"

namespace talbot {

double phi_beta(std::int64_t k, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("phi_beta: beta must be >= 0");
  const std::int64_t a = k < 0 ? -k : k;
  if (a == 0) return 1.0;
  // Smallest terms first.
  double s = 0.0;
  for (std::int64_t n = a; n >= 1; --n) s += std::pow(static_cast<double>(n), -beta);
  return 2.0 * s;
}

PhiGrowth phi_growth_exponent(double beta, std::int64_t k_lo, std::int64_t k_hi) {
  if (k_lo < 1 || k_hi < 4 * k_lo) throw std::invalid_argument("phi_growth_exponent: need 1 <= k_lo, 4 k_lo <= k_hi");
  std::vector<double> lx, ly;
  for (std::int64_t k = k_lo; 2 * k <= k_hi; k *= 2) {
    lx.push_back(std::log(static_cast<double>(k)));
    ly.push_back(std::log(phi_beta(2 * k, beta) - phi_beta(k, beta)));
  }
  const auto fit = fit_line(lx, ly);
  return {std::max(fit.slope, 0.0), fit.slope, fit.r_squared};
}

namespace {

double bracket_pow(std::int64_t x, double e) {
  const double d = static_cast<double>(x);
  return std::pow(1.0 + d * d, -0.5 * e);
}

void check_lemma_params(double beta, double gamma) {
  if (!(beta >= gamma && gamma >= 0.0 && beta + gamma > 1.0)) {
    throw std::invalid_argument("lemma1: need beta >= gamma >= 0 and beta + gamma > 1 (got beta = " +
                                std::to_string(beta) + ", gamma = " + std::to_string(gamma) + ")");
  }
}

}  // namespace

double lemma1_lhs(std::int64_t k1, std::int64_t k2, double beta, double gamma, std::int64_t n_max) {
  check_lemma_params(beta, gamma);
  double s = 0.0;
  for (std::int64_t n = -n_max; n <= n_max; ++n) s += bracket_pow(n - k1, beta) * bracket_pow(n - k2, gamma);
  return s;
}

double lemma1_rhs(std::int64_t k1, std::int64_t k2, double beta, double gamma) {
  return bracket_pow(k1 - k2, gamma) * phi_beta(k1 - k2, beta);
}

LemmaScanResult lemma1_ratio_scan(double beta, double gamma, std::int64_t k_range) {
  check_lemma_params(beta, gamma);
  if (k_range < 1) throw std::invalid_argument("lemma1_ratio_scan: k_range must be >= 1");
  const std::int64_t K = k_range;
  LemmaScanResult res;
  res.beta = beta;
  res.gamma = gamma;
  res.k_range = K;
  res.n_max = 8 * K;

  // With m = n - k2 and d = k1 - k2 the LHS is sum_{m=-n_max-k2}^{n_max-k2}
  // <m - d>^-beta <m>^-gamma, a window sum of a table indexed by m.
  const std::int64_t m_lo = -res.n_max - K;
  const std::int64_t m_hi = res.n_max + K;
  const auto width = static_cast<std::size_t>(m_hi - m_lo + 1);
  std::vector<double> w_gamma(width);
  for (std::int64_t m = m_lo; m <= m_hi; ++m) w_gamma[static_cast<std::size_t>(m - m_lo)] = bracket_pow(m, gamma);
  std::vector<double> prefix(width + 1);
  double min_rhs = std::numeric_limits<double>::infinity();

  for (std::int64_t d = -2 * K; d <= 2 * K; ++d) {
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      const std::int64_t m = m_lo + static_cast<std::int64_t>(i);
      prefix[i + 1] = prefix[i] + bracket_pow(m - d, beta) * w_gamma[i];
    }
    const double rhs = lemma1_rhs(d, 0, beta, gamma);
    min_rhs = std::min(min_rhs, rhs);
    const std::int64_t k2_lo = std::max(-K, -K - d);
    const std::int64_t k2_hi = std::min(K, K - d);
    for (std::int64_t k2 = k2_lo; k2 <= k2_hi; ++k2) {
      const auto a = static_cast<std::size_t>(-res.n_max - k2 - m_lo);
      const auto b = static_cast<std::size_t>(res.n_max - k2 - m_lo);
      const double ratio = (prefix[b + 1] - prefix[a]) / rhs;
      if (ratio > res.sup_ratio) {
        res.sup_ratio = ratio;
        res.argmax_k1 = k2 + d;
        res.argmax_k2 = k2;
      }
    }
  }
  const double s = beta + gamma;
  res.tail_bound = 2.0 * std::pow(7.0 * static_cast<double>(K), 1.0 - s) / (s - 1.0);
  res.ratio_uncertainty = res.tail_bound / min_rhs;
  return res;
}

PicardField picard_iterate(const FourierField& g, double t, const PicardOptions& options) {
  const auto& grid = g.grid();
  const std::size_t n = grid.n_modes();
  if (n > 512) throw std::invalid_argument("picard_iterate: n_modes must be <= 512, got " + std::to_string(n));
  if (!std::isfinite(t)) throw std::invalid_argument("picard_iterate: non-finite t");
  const std::int64_t kmin = grid.min_mode();
  const std::int64_t kmax = grid.max_mode();
  const double sign = options.reversed_phase ? -1.0 : 1.0;

  // Dense arrays indexed by k - kmin for a fixed, deterministic summation order.
  std::vector<cplx> c(n), mid(n), acc(n);
  for (std::int64_t k = kmin; k <= kmax; ++k) c[static_cast<std::size_t>(k - kmin)] = g.coeff(k);
  auto at = [&](const std::vector<cplx>& v, std::int64_t k) { return v[static_cast<std::size_t>(k - kmin)]; };
  auto term = [&](double phi) { return (std::polar(1.0, sign * phi * t) - 1.0) / phi; };

  if (options.indexing == PicardIndexing::duhamel) {
    for (std::int64_t k = kmin; k <= kmax; ++k) {
      const cplx v = at(c, k);
      mid[static_cast<std::size_t>(k - kmin)] = options.unconjugated_middle ? v : std::conj(v);
    }
    for (std::int64_t k1 = kmin; k1 <= kmax; ++k1) {
      for (std::int64_t k2 = kmin; k2 <= kmax; ++k2) {
        if (k1 == k2) continue;
        const cplx a = at(c, k1) * at(mid, k2);
        for (std::int64_t k3 = kmin; k3 <= kmax; ++k3) {
          if (k3 == k2) continue;
          const std::int64_t k = k1 - k2 + k3;
          if (k < kmin || k > kmax) continue;
          const double phi = 2.0 * static_cast<double>(k1 - k2) * static_cast<double>(k3 - k2);
          acc[static_cast<std::size_t>(k - kmin)] += a * at(c, k3) * term(phi);
        }
      }
    }
  } else {
    // b_{k2} = conj(g_{-k2}); -k2 must lie on the grid.
    for (std::int64_t k = kmin; k <= kmax; ++k) {
      const bool on_grid = grid.contains(-k);
      const cplx v = on_grid ? at(c, -k) : cplx{};
      mid[static_cast<std::size_t>(k - kmin)] = options.unconjugated_middle ? (on_grid ? at(c, k) : cplx{}) : std::conj(v);
    }
    for (std::int64_t k1 = kmin; k1 <= kmax; ++k1) {
      for (std::int64_t k2 = kmin; k2 <= kmax; ++k2) {
        if (k1 + k2 == 0 || !grid.contains(-k2)) continue;
        const cplx a = at(c, k1) * at(mid, k2);
        for (std::int64_t k3 = kmin; k3 <= kmax; ++k3) {
          if (k2 + k3 == 0) continue;
          const std::int64_t k = k1 + k2 + k3;
          if (k < kmin || k > kmax) continue;
          const double phi = 2.0 * static_cast<double>(k1 + k2) * static_cast<double>(k2 + k3);
          acc[static_cast<std::size_t>(k - kmin)] += a * at(c, k3) * term(phi);
        }
      }
    }
  }

  FourierField out(grid);
  for (std::int64_t k = kmin; k <= kmax; ++k) {
    cplx v = at(acc, k);
    if (options.include_diagonal) v += cplx(0.0, -t) * std::norm(at(c, k)) * at(c, k);
    out.coeff(k) = v;
  }
  return linear_propagate(out, t);
}

}  // namespace talbot
