#pragma once

#include <functional>
#include <limits>
#include <span>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "talbot/fft.hpp"
#include "talbot/field.hpp"

namespace talbot {

enum class Dealias { two_thirds, zero_padding, none };

std::string_view to_string(Dealias d);
/// Accepts "two-thirds-rule", "zero-padding-2x", "none".
std::optional<Dealias> parse_dealias(std::string_view s);

struct SolverConfig {
  double dt = 1e-3;
  Dealias dealias = Dealias::zero_padding;
  std::vector<double> snapshot_times;
  /// Adds -shift * u to the equation (i u_t + u_xx + |u|^2 u - shift u = 0).
  double linear_shift = 0.0;
  /// Hamiltonian is logged every `energy_stride` steps (0: only at snapshots).
  std::size_t energy_stride = 0;

  void validate() const;
};

/// The cubic term split into P c_k + rho_k + R_k with P = 2 sum |c_j|^2,
/// rho_k = -|c_k|^2 c_k and R the nonresonant remainder.
struct ResonantSplit {
  double P = 0.0;
  FourierField rho;
  FourierField R;

  FourierField total(const FourierField& u) const;
};

struct Snapshot {
  double t = 0.0;
  FourierField field;
};

struct ConservationSample {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();
};

struct EvolutionResult {
  std::vector<Snapshot> snapshots;
  std::vector<ConservationSample> conservation_log;
  /// Step size actually used on each inter-snapshot segment.
  std::vector<double> segment_dt;

  /// max |mass(t) / mass(0) - 1| over the log.
  double mass_drift() const;
  /// max |H(t) - H(0)| / |H(0)| over logged energies.
  double energy_drift() const;
  const Snapshot& at(double t) const;
};

/// Thrown when the state stops being finite. Carries everything computed up to
/// the last healthy step.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, EvolutionResult partial, FourierField last_healthy, double t_last)
      : std::runtime_error(what), partial_(std::move(partial)), last_(std::move(last_healthy)), t_last_(t_last) {}
  const EvolutionResult& partial() const { return partial_; }
  const FourierField& last_healthy() const { return last_; }
  double last_healthy_time() const { return t_last_; }

 private:
  EvolutionResult partial_;
  FourierField last_;
  double t_last_;
};

/// 2 pi sum |c_k|^2
double mass(const FourierField& u);
/// int |u_x|^2 - |u|^4 / 2, with the quartic term evaluated exactly on a 2x grid.
double hamiltonian(const FourierField& u);

/// Coefficients of |u|^2 u. zero_padding is exact for band-limited u.
FourierField cubic_term(const FourierField& u, Dealias policy = Dealias::zero_padding);

ResonantSplit resonant_split(const FourierField& u);

/// Exact flow of i u_t + |u|^2 u = 0: u -> u e^{i |u|^2 dt}.
SpatialField nonlinear_phase_step(const SpatialField& f, double dt);

/// Strang splitting L(h/2) N(h) L(h/2) with exact substeps. h may be negative.
class SplitStepper {
 public:
  SplitStepper(GridSpec grid, Dealias dealias, double linear_shift = 0.0);

  const GridSpec& grid() const { return grid_; }

  /// Take `n` steps of size h. `on_step(i, u)` runs after every step and may
  /// return false to stop early; the number of completed steps is returned.
  std::size_t advance(FourierField& u, double h, std::size_t n,
                      const std::function<bool(std::size_t, const FourierField&)>& on_step = {});

 private:
  void prepare(double h);
  void nonlinear(std::span<cplx> c, double h);

  GridSpec grid_;
  Dealias dealias_;
  double shift_;
  double prepared_h_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> half_;
  fft::AlignedBuffer buf_;
};

/// Evolve g to every snapshot time. Each segment between consecutive targets
/// uses dt_seg = length / ceil(length / dt) so targets are hit exactly.
EvolutionResult evolve(const FourierField& g, const SolverConfig& cfg);

/// u(t) - e^{iPt} e^{it d_xx} g with P = 2 sum |g_k|^2.
FourierField nonlinear_remainder(const FourierField& g, const FourierField& u_t, double t);

/// Evolves g and returns the remainder at t, which must be a snapshot time of cfg.
FourierField nonlinear_remainder(const FourierField& g, double t, const SolverConfig& cfg);

}  // namespace talbot
