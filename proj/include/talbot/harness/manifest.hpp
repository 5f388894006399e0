#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talbot/fractal.hpp"
#include "talbot/nls.hpp"
#include "talbot/step_data.hpp"

namespace talbot::harness {

enum class Experiment { evolve, quantize, dichotomy, smoothing, lemma_scan, picard_check };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view s);

struct ManifestError {
  int line = 0;  // 0 when the problem is not tied to a line
  std::string field;
  std::string message;

  std::string format() const;
};

class ManifestInvalid : public std::runtime_error {
 public:
  explicit ManifestInvalid(std::vector<ManifestError> errors);
  const std::vector<ManifestError>& errors() const { return errors_; }

 private:
  std::vector<ManifestError> errors_;
};

enum class DatumKind { step, band_limited };

struct DatumSpec {
  DatumKind kind = DatumKind::step;
  StepDataSpec step = StepDataSpec::half_indicator();
  double amplitude = 1.0;
  /// Explicit (mode, coefficient) pairs; empty means random modes |k| <= max_mode.
  std::vector<std::pair<std::int64_t, double>> modes;
  std::int64_t max_mode = 16;
};

struct QuantizeParams {
  /// Every coprime p in [0, q) for each q, in addition to rational times.
  std::vector<std::int64_t> denominators;
};

struct DichotomyParams {
  std::vector<std::size_t> resolutions{4096, 8192, 16384};
  Flow flow = Flow::nonlinear;
  CountRule rule = CountRule::oscillation;
  /// When nonzero, dimensions come from the composite solution on this grid.
  std::size_t composite_fine = 0;
  std::size_t composite_coarse = 8192;
};

struct SmoothingParams {
  std::size_t max_halvings = 3;
  double tolerance = 0.05;
  double min_gain = 0.4;
};

struct EvolveParams {
  double mass_tolerance = 1e-8;
  std::size_t max_halvings = 4;
};

struct LemmaScanParams {
  std::vector<std::pair<double, double>> pairs{{2.0, 0.6}, {1.0, 0.9}, {0.8, 0.8}};
  std::vector<std::int64_t> k_ranges{256, 512};
};

struct PicardParams {
  std::vector<double> amplitudes{0.02, 0.01};
};

struct RunManifest {
  int version = 1;
  Experiment experiment = Experiment::evolve;
  DatumSpec datum;
  std::size_t n_modes = 4096;
  SolverConfig solver;
  std::vector<TaggedTime> times;
  std::string output_dir = "talbot-out";
  std::uint64_t seed = 0;

  EvolveParams evolve;
  QuantizeParams quantize;
  DichotomyParams dichotomy;
  SmoothingParams smoothing;
  LemmaScanParams lemma_scan;
  PicardParams picard;
};

/// Parse and validate manifest text. `experiment_hint` (from a CLI
/// subcommand) fills a missing `experiment` key and must agree with a
/// present one. Throws ManifestInvalid listing every problem found.
RunManifest parse_manifest(std::string_view text, std::optional<Experiment> experiment_hint = std::nullopt);

/// Reads the file; I/O failures are reported as ManifestInvalid.
RunManifest load_manifest(const std::string& path, std::optional<Experiment> experiment_hint = std::nullopt);

/// Canonical text with every default spelled out. Parsing it gives back an
/// equal manifest.
std::string render_manifest(const RunManifest& m);

/// FNV-1a 64 of the canonical text without the [output] section, as 16 hex digits.
std::string manifest_digest(const RunManifest& m);

std::uint64_t fnv1a64(std::string_view bytes);

/// Closest candidate within edit distance max(2, |key| / 3), if any.
std::optional<std::string> suggest(std::string_view key, const std::vector<std::string>& candidates);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// The datum synthesized on `grid`.
FourierField build_datum(const DatumSpec& d, GridSpec grid, std::uint64_t seed);

}  // namespace talbot::harness
