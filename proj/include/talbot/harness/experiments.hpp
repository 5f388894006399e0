#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "talbot/harness/manifest.hpp"
#include "talbot/nls.hpp"
#include "talbot/regularity.hpp"

namespace talbot::harness {

enum ExitCode : int { kOk = 0, kGateFailed = 1, kInvalidManifest = 2, kSolverAborted = 3, kIoError = 4 };

struct Gate {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">=", "in"
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

Gate gate_below(std::string name, double value, double bound, bool strict = true);
Gate gate_at_least(std::string name, double value, double bound);
Gate gate_within(std::string name, double value, double lo, double hi);

struct RunOptions {
  unsigned threads = 1;
  /// Progress lines go here unless null.
  std::ostream* log = nullptr;
};

struct RunOutcome {
  int exit_code = kOk;
  std::string status;  // "ok", "gates-failed", "aborted"
  std::vector<Gate> gates;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs the experiment and writes into m.output_dir: manifest.resolved,
/// experiment CSVs and summary.json. A solver abort keeps what was written
/// and marks the summary as partial.
RunOutcome run(const RunManifest& m, const RunOptions& options);

/// Explicit value, else TALBOT_THREADS, else 1.
unsigned resolve_threads(std::optional<unsigned> requested);

/// fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct SmoothingStep {
  double dt = 0.0;
  RegularityReport linear;
  RegularityReport remainder;
  double gain = 0.0;
  double mass_drift = 0.0;
  FourierField remainder_field;
};

struct SmoothingStudy {
  std::vector<SmoothingStep> steps;
  bool converged = false;

  const SmoothingStep& final_step() const { return steps.back(); }
};

/// Decay exponents of the linear part and of the remainder at time t, with
/// dt halved until the remainder exponent moves by less than `tolerance`
/// (at most `max_halvings` halvings).
SmoothingStudy smoothing_study(const FourierField& g, double t, SolverConfig cfg, std::size_t max_halvings,
                               double tolerance);

struct GatedEvolution {
  EvolutionResult result;
  std::vector<double> dts;
  std::vector<double> drifts;
  bool within_tolerance = false;
};

/// evolve(), halving dt until the relative mass drift is below `tolerance`.
GatedEvolution evolve_mass_gated(const FourierField& g, SolverConfig cfg, double tolerance, std::size_t max_halvings);

}  // namespace talbot::harness
