#include "talbot/nls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "talbot/phase.hpp"
#include "talbot/spectral.hpp"

namespace talbot {

std::string_view to_string(Dealias d) {
  switch (d) {
    case Dealias::two_thirds:
      return "two-thirds-rule";
    case Dealias::zero_padding:
      return "zero-padding-2x";
    case Dealias::none:
      return "none";
  }
  return "none";
}

std::optional<Dealias> parse_dealias(std::string_view s) {
  if (s == "two-thirds-rule") return Dealias::two_thirds;
  if (s == "zero-padding-2x") return Dealias::zero_padding;
  if (s == "none") return Dealias::none;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !(dt <= 1e-2)) {
    throw std::invalid_argument("SolverConfig: dt must lie in (0, 1e-2], got " + std::to_string(dt));
  }
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("SolverConfig: snapshot times must be >= 0");
    if (i > 0 && t < snapshot_times[i - 1]) throw std::invalid_argument("SolverConfig: snapshot times must be sorted");
  }
  if (!std::isfinite(linear_shift)) throw std::invalid_argument("SolverConfig: non-finite linear shift");
}

FourierField ResonantSplit::total(const FourierField& u) const {
  FourierField out = rho + R;
  auto o = out.coeffs();
  auto c = u.coeffs();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += P * c[i];
  return out;
}

double EvolutionResult::mass_drift() const {
  if (conservation_log.empty()) return 0.0;
  const double m0 = conservation_log.front().mass;
  double worst = 0.0;
  for (const auto& s : conservation_log) worst = std::max(worst, std::abs(s.mass / m0 - 1.0));
  return worst;
}

double EvolutionResult::energy_drift() const {
  double h0 = std::numeric_limits<double>::quiet_NaN();
  double worst = 0.0;
  for (const auto& s : conservation_log) {
    if (std::isnan(s.energy)) continue;
    if (std::isnan(h0)) {
      h0 = s.energy;
      continue;
    }
    worst = std::max(worst, std::abs(s.energy - h0) / std::abs(h0));
  }
  return worst;
}

const Snapshot& EvolutionResult::at(double t) const {
  for (const auto& s : snapshots) {
    if (s.t == t) return s;
  }
  throw std::out_of_range("EvolutionResult: no snapshot at t = " + std::to_string(t));
}

double mass(const FourierField& u) { return kTwoPi * u.coeff_energy(); }

double hamiltonian(const FourierField& u) {
  const auto& g = u.grid();
  double kinetic = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double k = static_cast<double>(g.mode(i));
    kinetic += k * k * std::norm(u.coeffs()[i]);
  }
  // |u|^4 has modes up to 2(n-1) in magnitude; its mean is exact on 2n points.
  const auto fine = inverse_transform(u, GridSpec(2 * g.n_modes()));
  double quartic = 0.0;
  for (const auto& v : fine.samples()) {
    const double a = std::norm(v);
    quartic += a * a;
  }
  quartic /= static_cast<double>(fine.size());
  return kTwoPi * (kinetic - 0.5 * quartic);
}

namespace {

bool above_two_thirds(std::int64_t k, std::size_t n) { return 3 * std::abs(k) > static_cast<std::int64_t>(n); }

void cube_in_place(std::span<cplx> s) {
  for (auto& v : s) v *= std::norm(v);
}

}  // namespace

FourierField cubic_term(const FourierField& u, Dealias policy) {
  const auto& g = u.grid();
  switch (policy) {
    case Dealias::zero_padding: {
      const GridSpec fine(2 * g.n_modes());
      auto samples = inverse_transform(u, fine);
      cube_in_place(samples.samples());
      return resample(forward_transform(samples), g);
    }
    case Dealias::two_thirds: {
      FourierField filtered = u;
      for (std::size_t i = 0; i < g.n_modes(); ++i) {
        if (above_two_thirds(g.mode(i), g.n_modes())) filtered.coeffs()[i] = 0.0;
      }
      auto samples = inverse_transform(filtered);
      cube_in_place(samples.samples());
      auto out = forward_transform(samples);
      for (std::size_t i = 0; i < g.n_modes(); ++i) {
        if (above_two_thirds(g.mode(i), g.n_modes())) out.coeffs()[i] = 0.0;
      }
      return out;
    }
    case Dealias::none: {
      auto samples = inverse_transform(u);
      cube_in_place(samples.samples());
      return forward_transform(samples);
    }
  }
  throw std::logic_error("cubic_term: unknown dealias policy");
}

ResonantSplit resonant_split(const FourierField& u) {
  ResonantSplit split;
  split.P = 2.0 * u.coeff_energy();
  split.rho = FourierField(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx c = u.coeffs()[i];
    split.rho.coeffs()[i] = -std::norm(c) * c;
  }
  split.R = cubic_term(u, Dealias::zero_padding);
  auto r = split.R.coeffs();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= split.P * u.coeffs()[i] + split.rho.coeffs()[i];
  return split;
}

SpatialField nonlinear_phase_step(const SpatialField& f, double dt) {
  if (!std::isfinite(dt)) throw std::invalid_argument("nonlinear_phase_step: non-finite dt");
  SpatialField out = f;
  for (auto& v : out.samples()) v *= std::polar(1.0, std::norm(v) * dt);
  return out;
}

SplitStepper::SplitStepper(GridSpec grid, Dealias dealias, double linear_shift)
    : grid_(grid),
      dealias_(dealias),
      shift_(linear_shift),
      half_(grid.n_modes()),
      buf_(dealias == Dealias::zero_padding ? 2 * grid.n_modes() : grid.n_modes()) {}

void SplitStepper::prepare(double h) {
  if (h == prepared_h_) return;
  const double tau = 0.5 * h / kTwoPi;
  for (std::size_t i = 0; i < grid_.n_modes(); ++i) {
    const auto k = grid_.mode(i);
    half_[i] = unit_turn(-(frac_product(k * k, tau) + frac(shift_ * tau)));
  }
  prepared_h_ = h;
}

void SplitStepper::nonlinear(std::span<cplx> c, double h) {
  const std::size_t n = grid_.n_modes();
  const std::size_t m = buf_.size();
  auto b = buf_.span();
  if (m != n) {
    std::fill(b.begin(), b.end(), cplx{});
    for (std::size_t s = 0; s < n / 2; ++s) b[s] = c[s];
    for (std::size_t s = n / 2; s < n; ++s) b[m - n + s] = c[s];
  } else {
    std::copy(c.begin(), c.end(), b.begin());
  }
  buf_.backward_inplace();
  for (auto& v : b) {
    const double theta = std::norm(v) * h;
    v *= cplx(std::cos(theta), std::sin(theta));
  }
  buf_.forward_inplace();
  const double scale = 1.0 / static_cast<double>(m);
  if (m != n) {
    for (std::size_t s = 0; s < n / 2; ++s) c[s] = b[s] * scale;
    for (std::size_t s = n / 2; s < n; ++s) c[s] = b[m - n + s] * scale;
  } else {
    for (std::size_t s = 0; s < n; ++s) c[s] = b[s] * scale;
    if (dealias_ == Dealias::two_thirds) {
      for (std::size_t s = 0; s < n; ++s) {
        if (above_two_thirds(grid_.mode(s), n)) c[s] = 0.0;
      }
    }
  }
}

std::size_t SplitStepper::advance(FourierField& u, double h, std::size_t n,
                                  const std::function<bool(std::size_t, const FourierField&)>& on_step) {
  if (!(u.grid() == grid_)) throw std::invalid_argument("SplitStepper: grid mismatch");
  if (!std::isfinite(h)) throw std::invalid_argument("SplitStepper: non-finite step");
  prepare(h);
  auto c = u.coeffs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < c.size(); ++s) c[s] *= half_[s];
    nonlinear(c, h);
    for (std::size_t s = 0; s < c.size(); ++s) c[s] *= half_[s];
    if (on_step && !on_step(i, u)) return i + 1;
  }
  return n;
}

EvolutionResult evolve(const FourierField& g, const SolverConfig& cfg) {
  cfg.validate();
  EvolutionResult result;
  SplitStepper stepper(g.grid(), cfg.dealias, cfg.linear_shift);
  FourierField u = g;
  FourierField healthy = g;
  double t = 0.0;
  std::size_t global_step = 0;
  result.conservation_log.push_back({0, 0.0, mass(g), hamiltonian(g)});

  for (const double target : cfg.snapshot_times) {
    const double length = target - t;
    if (length > 0.0) {
      const auto steps = static_cast<std::size_t>(std::ceil(length / cfg.dt - 1e-9));
      const double h = length / static_cast<double>(steps);
      result.segment_dt.push_back(h);
      const double t0 = t;
      bool failed = false;
      stepper.advance(u, h, steps, [&](std::size_t i, const FourierField& cur) {
        const double m = mass(cur);
        ++global_step;
        const double now = t0 + h * static_cast<double>(i + 1);
        if (!std::isfinite(m)) {
          failed = true;
          return false;
        }
        ConservationSample sample{global_step, now, m, std::numeric_limits<double>::quiet_NaN()};
        if (cfg.energy_stride > 0 && global_step % cfg.energy_stride == 0) sample.energy = hamiltonian(cur);
        result.conservation_log.push_back(sample);
        healthy = cur;
        return true;
      });
      if (failed) {
        const double t_ok = result.conservation_log.back().t;
        std::ostringstream msg;
        msg << "evolve: state became non-finite after t = " << t_ok << " (step " << global_step
            << ", dt = " << h << ")";
        throw SolverAbort(msg.str(), std::move(result), std::move(healthy), t_ok);
      }
      u = healthy;
      t = target;
      result.conservation_log.back().t = target;
      if (std::isnan(result.conservation_log.back().energy)) result.conservation_log.back().energy = hamiltonian(u);
    }
    result.snapshots.push_back({target, u});
  }
  return result;
}

FourierField nonlinear_remainder(const FourierField& g, const FourierField& u_t, double t) {
  const double P = 2.0 * g.coeff_energy();
  auto linear = linear_propagate(g, t);
  linear *= std::polar(1.0, P * t);
  return u_t - linear;
}

FourierField nonlinear_remainder(const FourierField& g, double t, const SolverConfig& cfg) {
  if (std::find(cfg.snapshot_times.begin(), cfg.snapshot_times.end(), t) == cfg.snapshot_times.end()) {
    throw std::invalid_argument("nonlinear_remainder: t = " + std::to_string(t) + " is not a snapshot time");
  }
  const auto result = evolve(g, cfg);
  return nonlinear_remainder(g, result.at(t).field, t);
}

}  // namespace talbot
