#include "talbot/step_data.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "talbot/fit.hpp"
#include "talbot/phase.hpp"

namespace talbot {

void StepDataSpec::validate() const {
  if (breakpoints.empty()) throw std::invalid_argument("StepDataSpec: at least one breakpoint required");
  if (values.size() != breakpoints.size()) {
    throw std::invalid_argument("StepDataSpec: need one value per breakpoint (" + std::to_string(breakpoints.size()) +
                                " breakpoints, " + std::to_string(values.size()) + " values)");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double b = breakpoints[i];
    if (!std::isfinite(b) || b < 0.0 || b >= kTwoPi) {
      throw std::invalid_argument("StepDataSpec: breakpoint " + std::to_string(i) + " outside [0, 2pi)");
    }
    if (i > 0 && !(b > breakpoints[i - 1])) {
      throw std::invalid_argument("StepDataSpec: degenerate interval before breakpoint " + std::to_string(i) +
                                  " (breakpoints must be strictly increasing)");
    }
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      throw std::invalid_argument("StepDataSpec: non-finite value " + std::to_string(i));
    }
  }
  if (!(breakpoints.front() + kTwoPi > breakpoints.back())) {
    throw std::invalid_argument("StepDataSpec: wrap-around interval has zero length");
  }
}

double StepDataSpec::total_variation() const {
  double tv = 0.0;
  const std::size_t m = values.size();
  if (m < 2) return 0.0;
  for (std::size_t i = 0; i < m; ++i) tv += std::abs(values[i] - values[(i + m - 1) % m]);
  return tv;
}

double StepDataSpec::max_jump() const {
  double mj = 0.0;
  const std::size_t m = values.size();
  for (std::size_t i = 0; m > 1 && i < m; ++i) mj = std::max(mj, std::abs(values[i] - values[(i + m - 1) % m]));
  return mj;
}

StepDataSpec StepDataSpec::scaled(cplx factor) const {
  StepDataSpec out = *this;
  for (auto& v : out.values) v *= factor;
  return out;
}

StepDataSpec StepDataSpec::half_indicator() { return StepDataSpec{{0.0, kPi}, {1.0, 0.0}}; }

FourierField synthesize_step(const StepDataSpec& spec, GridSpec grid) {
  spec.validate();
  FourierField out(grid);
  const std::size_t m = spec.breakpoints.size();
  // Breakpoints in turns; exact quarter turns (0, pi/2, pi, ...) stay exact.
  std::vector<double> turns(m);
  for (std::size_t i = 0; i < m; ++i) turns[i] = spec.breakpoints[i] / kTwoPi;

  cplx mean{};
  for (std::size_t i = 0; i < m; ++i) {
    const double left = spec.breakpoints[i];
    const double right = i + 1 < m ? spec.breakpoints[i + 1] : spec.breakpoints[0] + kTwoPi;
    mean += spec.values[i] * (right - left);
  }
  out.coeff(0) = mean / kTwoPi;

  for (std::size_t s = 0; s < grid.n_modes(); ++s) {
    const auto k = grid.mode(s);
    if (k == 0) continue;
    cplx acc{};
    for (std::size_t i = 0; i < m; ++i) {
      const double right_turns = turns[(i + 1) % m];  // wrap piece: +1 turn leaves the phase unchanged
      acc += spec.values[i] * (unit_turn(-frac_product(k, turns[i])) - unit_turn(-frac_product(k, right_turns)));
    }
    out.coeffs()[s] = acc / cplx(0.0, kTwoPi * static_cast<double>(k));
  }
  return out;
}

RegularityReport certify_sobolev_class(const FourierField& u, std::int64_t cutoff) {
  const auto& g = u.grid();
  if (cutoff <= 0) cutoff = static_cast<std::int64_t>(g.n_modes() / 2);
  cutoff = std::min<std::int64_t>(cutoff, static_cast<std::int64_t>(g.n_modes() / 2));
  const std::int64_t lo = cutoff / 4;

  std::vector<double> lx, ly;
  std::size_t window = 0;
  for (std::size_t s = 0; s < g.n_modes(); ++s) {
    const auto a = std::abs(g.mode(s));
    if (a < lo || a >= cutoff) continue;
    ++window;
    const double mag = std::abs(u.coeffs()[s]);
    if (!(mag >= DBL_MIN)) continue;
    lx.push_back(std::log(static_cast<double>(a)));
    ly.push_back(std::log(mag));
  }

  RegularityReport r;
  r.p = 2.0;
  r.window_lo = static_cast<long>(lo);
  r.window_hi = static_cast<long>(cutoff - 1);
  r.samples = lx.size();
  if (window > 0 && lx.empty()) {
    r.superpolynomial = true;
    r.exponent = std::numeric_limits<double>::infinity();
    r.critical_index = std::numeric_limits<double>::infinity();
    r.r_squared = 1.0;
    return r;
  }
  if (lx.size() < 64) {
    throw InsufficientData("certify_sobolev_class: only " + std::to_string(lx.size()) +
                           " nonzero modes in |k| in [" + std::to_string(lo) + ", " + std::to_string(cutoff) +
                           "); at least 64 needed for a reliable decay fit");
  }
  const auto fit = fit_line(lx, ly);
  r.exponent = -fit.slope;
  r.critical_index = r.exponent - 0.5;
  r.r_squared = fit.r_squared;
  return r;
}

}  // namespace talbot
