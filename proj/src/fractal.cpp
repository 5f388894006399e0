#include "talbot/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "talbot/fit.hpp"
#include "talbot/quantization.hpp"
#include "talbot/spectral.hpp"

namespace talbot {

namespace {

constexpr double kScaleSlack = 1e-9;

struct Columns {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Extremes of the piecewise-linear interpolant over columns [c eps, (c+1) eps).
// On each column the interpolant is continuous, so its extremes sit at samples
// or at the column edges.
Columns column_extremes(const GraphSamples& g, double eps) {
  const std::size_t n = g.xs.size();
  const double end = g.x_end();
  const auto ncol = static_cast<std::size_t>(std::max(1.0, std::ceil(end / eps - kScaleSlack)));
  Columns cols{std::vector<double>(ncol, std::numeric_limits<double>::infinity()),
               std::vector<double>(ncol, -std::numeric_limits<double>::infinity())};
  auto touch = [&](std::size_t c, double y) {
    cols.lo[c] = std::min(cols.lo[c], y);
    cols.hi[c] = std::max(cols.hi[c], y);
  };
  auto column_of = [&](double x) { return std::min(static_cast<std::size_t>(x / eps), ncol - 1); };

  const std::size_t points = g.periodic ? n + 1 : n;
  auto px = [&](std::size_t j) { return j < n ? g.xs[j] : end; };
  auto py = [&](std::size_t j) { return j < n ? g.ys[j] : g.ys[0]; };
  for (std::size_t j = 0; j < points; ++j) touch(column_of(px(j)), py(j));

  const double dx = g.spacing();
  const double x0 = g.xs[0];
  for (std::size_t c = 1; c < ncol; ++c) {
    const double xb = static_cast<double>(c) * eps;
    if (xb <= x0 || xb >= end) continue;
    auto j = static_cast<std::size_t>((xb - x0) / dx);
    j = std::min(j, points - 2);
    const double f = (xb - px(j)) / (px(j + 1) - px(j));
    const double yb = py(j) + f * (py(j + 1) - py(j));
    touch(c - 1, yb);
    touch(c, yb);
  }
  return cols;
}

void check_scale(const GraphSamples& g, double eps) {
  const auto [lo, hi] = admissible_scales(g);
  if (!(eps >= lo * (1.0 - kScaleSlack) && eps <= hi * (1.0 + kScaleSlack))) throw InadmissibleScale(eps, lo, hi);
}

}  // namespace

void GraphSamples::validate() const {
  if (xs.size() != ys.size()) throw std::invalid_argument("GraphSamples: xs and ys differ in length");
  if (xs.size() < 256) {
    throw std::invalid_argument("GraphSamples: at least 256 samples required, got " + std::to_string(xs.size()));
  }
  const double dx = xs[1] - xs[0];
  if (!(dx > 0.0) || xs.front() < 0.0 || xs.back() >= kTwoPi) {
    throw std::invalid_argument("GraphSamples: xs must increase inside [0, 2pi)");
  }
  for (std::size_t j = 1; j < xs.size(); ++j) {
    if (std::abs((xs[j] - xs[j - 1]) - dx) > 1e-9 * dx) {
      throw std::invalid_argument("GraphSamples: xs not uniformly spaced at index " + std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (!std::isfinite(ys[j])) throw std::invalid_argument("GraphSamples: non-finite value at index " + std::to_string(j));
  }
}

double GraphSamples::x_end() const { return periodic ? kTwoPi : xs.back(); }

double GraphSamples::y_range() const {
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  return *hi - *lo;
}

std::string_view to_string(Component c) { return c == Component::real ? "re" : "im"; }

GraphSamples graph_from_field(const SpatialField& f, Component c) {
  GraphSamples g;
  const std::size_t n = f.size();
  g.xs.resize(n);
  g.ys.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.xs[j] = f.grid().x(j);
    g.ys[j] = c == Component::real ? f[j].real() : f[j].imag();
  }
  g.periodic = true;
  return g;
}

InadmissibleScale::InadmissibleScale(double eps, double lo, double hi)
    : std::invalid_argument([&] {
        std::ostringstream s;
        s.precision(6);
        s << "box size " << eps << " outside the admissible range [" << lo << ", " << hi << "]";
        return s.str();
      }()),
      lo_(lo),
      hi_(hi) {}

std::pair<double, double> admissible_scales(const GraphSamples& graph) {
  const double lo = 4.0 * graph.spacing();
  return {lo, std::max(graph.y_range(), lo)};
}

std::int64_t box_count(const GraphSamples& graph, double eps) {
  graph.validate();
  check_scale(graph, eps);
  const auto cols = column_extremes(graph, eps);
  std::int64_t total = 0;
  for (std::size_t c = 0; c < cols.lo.size(); ++c) {
    total += static_cast<std::int64_t>(std::floor(cols.hi[c] / eps) - std::floor(cols.lo[c] / eps)) + 1;
  }
  return total;
}

double oscillation_count(const GraphSamples& graph, double eps) {
  graph.validate();
  check_scale(graph, eps);
  const auto cols = column_extremes(graph, eps);
  double total = 0.0;
  for (std::size_t c = 0; c < cols.lo.size(); ++c) total += std::max((cols.hi[c] - cols.lo[c]) / eps, 1.0);
  return total;
}

std::string_view to_string(CountRule r) { return r == CountRule::oscillation ? "oscillation" : "lattice"; }

std::vector<double> eps_ladder(const EpsRange& range) {
  if (!(range.lo > 0.0) || !(range.hi >= range.lo)) throw std::invalid_argument("eps_ladder: need 0 < lo <= hi");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double e = range.lo * std::pow(std::sqrt(2.0), i);
    if (e > range.hi * (1.0 + kScaleSlack)) break;
    out.push_back(e);
  }
  return out;
}

EpsRange default_eps_range(const GraphSamples& graph) { return {4.0 * graph.spacing(), graph.y_range() / 4.0}; }

DimensionEstimate minkowski_dimension(const GraphSamples& graph, std::optional<EpsRange> range, CountRule rule) {
  graph.validate();
  const EpsRange r = range.value_or(default_eps_range(graph));
  if (!(r.lo > 0.0) || !(r.hi > r.lo) || r.hi / r.lo < 8.0 * (1.0 - kScaleSlack)) {
    std::ostringstream s;
    s << "minkowski_dimension: eps range [" << r.lo << ", " << r.hi << "] spans fewer than 3 octaves";
    throw std::invalid_argument(s.str());
  }
  const auto ladder = eps_ladder(r);
  if (ladder.size() < 6) {
    throw std::invalid_argument("minkowski_dimension: only " + std::to_string(ladder.size()) +
                                " ladder points; at least 6 required");
  }
  DimensionEstimate est;
  est.rule = rule;
  est.eps_min = ladder.front();
  est.eps_max = ladder.back();
  std::vector<double> lx, ly;
  for (const double e : ladder) {
    const double count =
        rule == CountRule::lattice ? static_cast<double>(box_count(graph, e)) : oscillation_count(graph, e);
    est.counts.emplace_back(e, count);
    lx.push_back(std::log(1.0 / e));
    ly.push_back(std::log(count));
  }
  const auto fit = fit_line(lx, ly);
  est.dimension = fit.slope;
  est.r_squared = fit.r_squared;
  est.out_of_range = est.dimension < 1.0 || est.dimension > 2.0;
  return est;
}

RegularityReport besov_critical_exponent(const FourierField& u, double p, int j_min) {
  const int j_max = max_block_index(u.grid());
  std::vector<std::pair<int, double>> norms;
  double largest = 0.0;
  for (int j = std::max(j_min, 0); j <= j_max; ++j) {
    const auto block = littlewood_paley_block(u, j);
    const double norm = lp_norm(inverse_transform(block.field), p);
    norms.emplace_back(j, norm);
    largest = std::max(largest, norm);
  }
  RegularityReport r;
  r.p = p;
  std::vector<double> jx, ly;
  for (const auto& [j, norm] : norms) {
    if (!(norm > 1e-13 * largest)) continue;
    jx.push_back(j);
    ly.push_back(std::log2(norm));
    r.blocks.emplace_back(j, std::log2(norm));
  }
  if (jx.size() < 5) {
    throw InsufficientData("besov_critical_exponent: " + std::to_string(jx.size()) +
                           " dyadic blocks with nonzero norm; at least 5 required");
  }
  const auto fit = fit_line(jx, ly);
  r.exponent = -fit.slope;
  r.critical_index = r.exponent;
  r.r_squared = fit.r_squared;
  r.window_lo = r.blocks.front().first;
  r.window_hi = r.blocks.back().first;
  r.samples = jx.size();
  return r;
}

double max_increment(const SpatialField& f) {
  const std::size_t n = f.size();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) best = std::max(best, std::abs(f[(j + 1) % n] - f[j]));
  return best;
}

double TaggedTime::seconds() const { return rational ? rational->seconds() : kTwoPi * turns; }

TaggedTime TaggedTime::from_rational(const RationalTime& rt) { return {rt.to_string(), rt.turns(), rt}; }

const std::vector<TaggedTime>& irrational_presets() {
  static const std::vector<TaggedTime> presets{
      {"sqrt2", std::sqrt(2.0) - 1.0, std::nullopt},
      {"golden", (std::sqrt(5.0) - 1.0) / 2.0, std::nullopt},
      {"sqrt3", std::sqrt(3.0) - 1.0, std::nullopt},
  };
  return presets;
}

std::optional<TaggedTime> find_preset(std::string_view label) {
  for (const auto& p : irrational_presets()) {
    if (p.label == label) return p;
  }
  return std::nullopt;
}

double DichotomyRow::refinement_ratio() const {
  if (increments.size() < 2) return 1.0;
  return increments.front().max_increment / increments.back().max_increment;
}

namespace {

FourierField exact_linear(const FourierField& g, const TaggedTime& t) {
  return t.rational ? linear_propagate(g, *t.rational) : linear_propagate_turns(g, t.turns);
}

// Solutions at every time, in the order of `times`, on one grid.
std::vector<FourierField> solve_all(const FourierField& g, const std::vector<TaggedTime>& times, Flow flow,
                                    const SolverConfig& solver) {
  std::vector<FourierField> out;
  out.reserve(times.size());
  if (flow == Flow::linear) {
    for (const auto& t : times) out.push_back(exact_linear(g, t));
    return out;
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return times[a].seconds() < times[b].seconds(); });
  SolverConfig cfg = solver;
  cfg.snapshot_times.clear();
  for (const auto i : order) cfg.snapshot_times.push_back(times[i].seconds());
  const auto result = evolve(g, cfg);
  out.assign(times.size(), FourierField(g.grid()));
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = result.snapshots[r].field;
  return out;
}

}  // namespace

DichotomyRow measure_graph(const TaggedTime& time, const FourierField& u, CountRule rule) {
  DichotomyRow row;
  row.time = time;
  const auto samples = inverse_transform(u);
  const auto re = graph_from_field(samples, Component::real);
  const auto im = graph_from_field(samples, Component::imag);
  const double flat = 16.0 * re.spacing();
  row.dim_real = minkowski_dimension(re, std::nullopt, rule);
  row.dimension = row.dim_real.dimension;
  row.imag_flat = im.y_range() < flat;
  if (!row.imag_flat) {
    row.dim_imag = minkowski_dimension(im, std::nullopt, rule);
    row.dimension = std::max(row.dimension, row.dim_imag.dimension);
  }
  return row;
}

std::vector<DichotomyRow> dichotomy_scan(const StepDataSpec& datum, const std::vector<TaggedTime>& times,
                                         const DichotomyOptions& options) {
  if (times.empty()) throw std::invalid_argument("dichotomy_scan: no times given");
  if (options.resolutions.empty()) throw std::invalid_argument("dichotomy_scan: no resolutions given");
  std::vector<std::vector<FourierField>> per_resolution;
  for (const auto n : options.resolutions) {
    const auto g = synthesize_step(datum, GridSpec(n));
    per_resolution.push_back(solve_all(g, times, options.flow, options.solver));
  }
  std::vector<DichotomyRow> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    auto row = measure_graph(times[i], per_resolution.back()[i], options.rule);
    for (std::size_t r = 0; r < options.resolutions.size(); ++r) {
      row.increments.push_back({options.resolutions[r], max_increment(inverse_transform(per_resolution[r][i]))});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FourierField> composite_solutions(const StepDataSpec& datum, const std::vector<TaggedTime>& times,
                                              GridSpec fine, GridSpec coarse, const SolverConfig& solver) {
  if (fine.n_modes() < coarse.n_modes()) throw std::invalid_argument("composite_solutions: fine grid is coarser");
  const auto g_coarse = synthesize_step(datum, coarse);
  const auto g_fine = synthesize_step(datum, fine);
  const auto nonlinear = solve_all(g_coarse, times, Flow::nonlinear, solver);
  const double P = 2.0 * g_coarse.coeff_energy();
  std::vector<FourierField> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i].seconds();
    auto remainder = nonlinear[i] - std::polar(1.0, P * t) * exact_linear(g_coarse, times[i]);
    auto full = std::polar(1.0, P * t) * exact_linear(g_fine, times[i]);
    full += resample(remainder, fine);
    out.push_back(std::move(full));
  }
  return out;
}

}  // namespace talbot
