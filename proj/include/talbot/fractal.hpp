#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talbot/field.hpp"
#include "talbot/nls.hpp"
#include "talbot/rational_time.hpp"
#include "talbot/regularity.hpp"
#include "talbot/step_data.hpp"

namespace talbot {

/// Uniformly spaced samples of a real function on [0, 2 pi). A periodic graph
/// closes with a segment from the last sample to (2 pi, ys[0]).
struct GraphSamples {
  std::vector<double> xs;
  std::vector<double> ys;
  bool periodic = true;

  /// Throws std::invalid_argument unless sizes match, n >= 256 and xs is
  /// uniform and increasing inside [0, 2 pi).
  void validate() const;
  double spacing() const { return xs[1] - xs[0]; }
  /// Right end of the interpolant: 2 pi when periodic, xs.back() otherwise.
  double x_end() const;
  double y_range() const;
};

enum class Component { real, imag };

std::string_view to_string(Component c);

GraphSamples graph_from_field(const SpatialField& f, Component c);

/// A box size outside [4 * spacing, max(y range, 4 * spacing)].
class InadmissibleScale : public std::invalid_argument {
 public:
  InadmissibleScale(double eps, double lo, double hi);
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Admissible box sizes for box_count.
std::pair<double, double> admissible_scales(const GraphSamples& graph);

/// Lattice boxes [a eps, (a+1) eps) x [b eps, (b+1) eps) met by the
/// piecewise-linear interpolant.
std::int64_t box_count(const GraphSamples& graph, double eps);

/// Per column of width eps: max(oscillation / eps, 1), summed.
double oscillation_count(const GraphSamples& graph, double eps);

enum class CountRule { oscillation, lattice };

std::string_view to_string(CountRule r);

struct EpsRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// lo * sqrt(2)^i for all i with the value <= hi (up to rounding).
std::vector<double> eps_ladder(const EpsRange& range);

/// Default window: 4 * spacing to y_range / 4.
EpsRange default_eps_range(const GraphSamples& graph);

struct DimensionEstimate {
  double dimension = 0.0;
  double r_squared = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  /// (eps, N(eps)) on the ladder
  std::vector<std::pair<double, double>> counts;
  /// Raw fit outside [1, 2]; the value is never clamped.
  bool out_of_range = false;
  CountRule rule = CountRule::oscillation;
};

/// Slope of log N(eps) against log(1/eps) on the sqrt(2) ladder. The range must
/// span at least 3 octaves and give at least 6 ladder points.
DimensionEstimate minkowski_dimension(const GraphSamples& graph, std::optional<EpsRange> range = std::nullopt,
                                      CountRule rule = CountRule::oscillation);

/// Fit log2 ||P_j u||_p ~ -s j over blocks j_min..max with nonzero norm; at
/// least 5 such blocks are required (InsufficientData otherwise).
RegularityReport besov_critical_exponent(const FourierField& u, double p, int j_min = 2);

/// max_j |f(x_{j+1}) - f(x_j)|, including the wrap-around pair.
double max_increment(const SpatialField& f);

/// A time t = 2 pi * turns; rational when `rational` is set.
struct TaggedTime {
  std::string label;
  double turns = 0.0;
  std::optional<RationalTime> rational;

  double seconds() const;
  static TaggedTime from_rational(const RationalTime& rt);
};

/// Fractional parts of sqrt 2, the golden ratio and sqrt 3.
const std::vector<TaggedTime>& irrational_presets();
std::optional<TaggedTime> find_preset(std::string_view label);

enum class Flow { linear, nonlinear };

struct IncrementSample {
  std::size_t n_modes = 0;
  double max_increment = 0.0;
};

struct DichotomyRow {
  TaggedTime time;
  std::vector<IncrementSample> increments;
  DimensionEstimate dim_real;
  DimensionEstimate dim_imag;
  bool imag_flat = false;
  /// max of the real and imaginary estimates
  double dimension = 0.0;

  /// increment at the coarsest resolution over the one at the finest
  double refinement_ratio() const;
};

struct DichotomyOptions {
  Flow flow = Flow::nonlinear;
  SolverConfig solver;
  std::vector<std::size_t> resolutions{4096, 8192, 16384};
  CountRule rule = CountRule::oscillation;
};

/// Per time: max increment at every resolution and the dimension of the
/// finest-resolution graph. The nonlinear flow runs one evolution per
/// resolution covering all times.
std::vector<DichotomyRow> dichotomy_scan(const StepDataSpec& datum, const std::vector<TaggedTime>& times,
                                         const DichotomyOptions& options);

/// Solution of the datum at each time on `fine`: the exact linear part
/// e^{iPt} e^{it d_xx} g on `fine` plus the nonlinear remainder computed by
/// the solver on `coarse`.
std::vector<FourierField> composite_solutions(const StepDataSpec& datum, const std::vector<TaggedTime>& times,
                                              GridSpec fine, GridSpec coarse, const SolverConfig& solver);

/// Larger of the two component dimensions; a component whose range is below
/// the resolvable scale is reported flat and skipped.
DichotomyRow measure_graph(const TaggedTime& time, const FourierField& u, CountRule rule);

}  // namespace talbot
