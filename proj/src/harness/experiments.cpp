#include "talbot/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

#include "talbot/fractal.hpp"
#include "talbot/harness/csv.hpp"
#include "talbot/quantization.hpp"
#include "talbot/spectral.hpp"
#include "talbot/step_data.hpp"
#include "talbot/verification.hpp"

namespace talbot::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

Gate gate_below(std::string name, double value, double bound, bool strict) {
  return {std::move(name), value, strict ? "<" : "<=", 0.0, bound, strict ? value < bound : value <= bound};
}

Gate gate_at_least(std::string name, double value, double bound) {
  return {std::move(name), value, ">=", bound, 0.0, value >= bound};
}

Gate gate_within(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, "in", lo, hi, value >= lo && value <= hi};
}

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("TALBOT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1u, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SmoothingStudy smoothing_study(const FourierField& g, double t, SolverConfig cfg, std::size_t max_halvings,
                               double tolerance) {
  SmoothingStudy study;
  cfg.snapshot_times = {t};
  const auto linear = certify_sobolev_class(g);
  for (std::size_t i = 0; i <= max_halvings; ++i) {
    const auto result = evolve(g, cfg);
    SmoothingStep step;
    step.dt = cfg.dt;
    step.linear = linear;
    step.remainder_field = nonlinear_remainder(g, result.at(t).field, t);
    step.remainder = certify_sobolev_class(step.remainder_field);
    step.gain = step.remainder.exponent - step.linear.exponent;
    step.mass_drift = result.mass_drift();
    const bool settled =
        !study.steps.empty() && std::abs(step.remainder.exponent - study.steps.back().remainder.exponent) < tolerance;
    study.steps.push_back(std::move(step));
    if (settled) {
      study.converged = true;
      break;
    }
    cfg.dt /= 2.0;
  }
  return study;
}

GatedEvolution evolve_mass_gated(const FourierField& g, SolverConfig cfg, double tolerance, std::size_t max_halvings) {
  GatedEvolution out;
  for (std::size_t i = 0;; ++i) {
    out.result = evolve(g, cfg);
    out.dts.push_back(cfg.dt);
    out.drifts.push_back(out.result.mass_drift());
    if (out.drifts.back() < tolerance) {
      out.within_tolerance = true;
      return out;
    }
    if (i == max_halvings) return out;
    cfg.dt /= 2.0;
  }
}

namespace {

json gate_json(const Gate& g) {
  json j;
  j["name"] = g.name;
  j["value"] = g.value;
  j["relation"] = g.relation;
  if (g.relation == "in") {
    j["bounds"] = {g.lo, g.hi};
  } else {
    j["bound"] = g.relation == ">=" ? g.lo : g.hi;
  }
  j["pass"] = g.pass;
  return j;
}

class Run {
 public:
  Run(const RunManifest& m, const RunOptions& o) : m_(m), opt_(o), dir_(m.output_dir), digest_(manifest_digest(m)) {}

  RunOutcome execute() {
    fs::create_directories(dir_);
    {
      const auto path = dir_ / "manifest.resolved";
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << "# manifest-digest: fnv1a64:" << digest_ << "\n" << render_manifest(m_);
      outcome_.artifacts.push_back(path);
    }
    try {
      switch (m_.experiment) {
        case Experiment::evolve:
          run_evolve();
          break;
        case Experiment::quantize:
          run_quantize();
          break;
        case Experiment::dichotomy:
          run_dichotomy();
          break;
        case Experiment::smoothing:
          run_smoothing();
          break;
        case Experiment::lemma_scan:
          run_lemma_scan();
          break;
        case Experiment::picard_check:
          run_picard();
          break;
      }
      const bool all = std::all_of(outcome_.gates.begin(), outcome_.gates.end(), [](const Gate& g) { return g.pass; });
      outcome_.status = all ? "ok" : "gates-failed";
      outcome_.exit_code = all ? kOk : kGateFailed;
    } catch (const SolverAbort& e) {
      write_partial(e);
      outcome_.status = "aborted";
      outcome_.exit_code = kSolverAborted;
      results_["error"] = e.what();
      results_["partial"] = true;
    }
    write_summary();
    return outcome_;
  }

 private:
  void log(const std::string& line) {
    if (opt_.log) *opt_.log << "[" << to_string(m_.experiment) << "] " << line << std::endl;
  }

  CsvWriter csv(const std::string& name, std::vector<std::string> columns) {
    const auto path = dir_ / name;
    outcome_.artifacts.push_back(path);
    return CsvWriter(path, digest_, to_string(m_.experiment), std::move(columns));
  }

  GridSpec grid() const { return GridSpec(m_.n_modes); }
  FourierField datum(GridSpec g) const { return build_datum(m_.datum, g, m_.seed); }

  std::vector<std::size_t> time_order() const {
    std::vector<std::size_t> order(m_.times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m_.times[a].seconds() < m_.times[b].seconds(); });
    return order;
  }

  void write_conservation(const EvolutionResult& r, const std::string& name) {
    auto w = csv(name, {"step", "t", "mass", "energy"});
    for (const auto& s : r.conservation_log) w.row(static_cast<std::uint64_t>(s.step), s.t, s.mass, s.energy);
  }

  void write_partial(const SolverAbort& e) {
    write_conservation(e.partial(), "conservation.partial.csv");
    auto w = csv("last_healthy.partial.csv", {"t", "k", "re", "im"});
    const auto& f = e.last_healthy();
    for (auto k = f.grid().min_mode(); k <= f.grid().max_mode(); ++k) {
      w.row(e.last_healthy_time(), k, f.coeff(k).real(), f.coeff(k).imag());
    }
  }

  void run_evolve() {
    const auto g = datum(grid());
    SolverConfig cfg = m_.solver;
    const auto order = time_order();
    for (auto i : order) cfg.snapshot_times.push_back(m_.times[i].seconds());
    log("evolving " + std::to_string(m_.n_modes) + " modes to t = " + short_number(cfg.snapshot_times.back()));
    const auto gated = evolve_mass_gated(g, cfg, m_.evolve.mass_tolerance, m_.evolve.max_halvings);
    {
      auto w = csv("dt_trials.csv", {"dt", "mass_drift"});
      for (std::size_t i = 0; i < gated.dts.size(); ++i) w.row(gated.dts[i], gated.drifts[i]);
    }
    {
      auto w = csv("snapshots.csv", {"time_label", "t", "k", "re", "im"});
      for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& tt = m_.times[order[r]];
        const auto& f = gated.result.snapshots[r].field;
        for (auto k = f.grid().min_mode(); k <= f.grid().max_mode(); ++k) {
          w.row(tt.label, gated.result.snapshots[r].t, k, f.coeff(k).real(), f.coeff(k).imag());
        }
      }
    }
    write_conservation(gated.result, "conservation.csv");
    results_["dt"] = gated.dts.back();
    results_["mass_drift"] = gated.drifts.back();
    results_["energy_drift"] = gated.result.energy_drift();
    outcome_.gates.push_back(gate_below("mass_drift", gated.drifts.back(), m_.evolve.mass_tolerance));
  }

  void run_quantize() {
    std::vector<RationalTime> rts;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    auto add = [&](const RationalTime& rt) {
      if (seen.insert({rt.q(), rt.p()}).second) rts.push_back(rt);
    };
    for (const auto& t : m_.times) add(*t.rational);
    for (const auto q : m_.quantize.denominators) {
      for (std::int64_t p = 0; p < q; ++p) {
        if (std::gcd(p, q) == 1) add(RationalTime(p, q));
      }
    }
    const auto g = datum(grid());
    std::vector<TranslateCombination> combos(rts.size());
    std::vector<double> rel(rts.size()), max_coeff(rts.size());
    log("checking " + std::to_string(rts.size()) + " rational times on " + std::to_string(m_.n_modes) + " modes");
    parallel_for(rts.size(), opt_.threads, [&](std::size_t i) {
      combos[i] = quantization_coefficients(rts[i]);
      const auto q = quantized_evolution(g, combos[i]);
      const auto exact = linear_propagate(g, rts[i]);
      const auto diff = q - exact;
      rel[i] = diff.l2_norm() / exact.l2_norm();
      double mc = 0.0;
      for (const auto& c : diff.coeffs()) mc = std::max(mc, std::abs(c));
      max_coeff[i] = mc;
    });
    {
      auto w = csv("coefficients.csv", {"q", "p", "m", "re", "im"});
      for (std::size_t i = 0; i < rts.size(); ++i) {
        for (std::int64_t mm = 0; mm < rts[i].q(); ++mm) {
          const auto a = combos[i].coefficients[static_cast<std::size_t>(mm)];
          w.row(rts[i].q(), rts[i].p(), mm, a.real(), a.imag());
        }
      }
    }
    {
      auto w = csv("discrepancy.csv", {"q", "p", "relative_l2", "max_coefficient"});
      for (std::size_t i = 0; i < rts.size(); ++i) w.row(rts[i].q(), rts[i].p(), rel[i], max_coeff[i]);
    }
    const double worst = rts.empty() ? 0.0 : *std::max_element(rel.begin(), rel.end());
    results_["times_checked"] = rts.size();
    results_["max_relative_l2"] = worst;
    outcome_.gates.push_back(gate_below("max_relative_l2_discrepancy", worst, 1e-10));
  }

  void run_dichotomy() {
    if (m_.datum.kind != DatumKind::step) throw std::invalid_argument("dichotomy needs a step datum");
    const auto spec = m_.datum.step.scaled(m_.datum.amplitude);
    DichotomyOptions opt;
    opt.flow = m_.dichotomy.flow;
    opt.solver = m_.solver;
    opt.resolutions = m_.dichotomy.resolutions;
    opt.rule = m_.dichotomy.rule;
    log("scanning " + std::to_string(m_.times.size()) + " times at " + std::to_string(opt.resolutions.size()) +
        " resolutions");
    auto rows = dichotomy_scan(spec, m_.times, opt);
    if (m_.dichotomy.composite_fine != 0) {
      log("composite solutions on " + std::to_string(m_.dichotomy.composite_fine) + " modes");
      const auto fields = composite_solutions(spec, m_.times, GridSpec(m_.dichotomy.composite_fine),
                                              GridSpec(m_.dichotomy.composite_coarse), m_.solver);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto measured = measure_graph(m_.times[i], fields[i], opt.rule);
        measured.increments = std::move(rows[i].increments);
        rows[i] = std::move(measured);
      }
    }
    // Initial jump at each resolution, the reference for rational times.
    std::vector<double> initial;
    for (const auto n : opt.resolutions) initial.push_back(max_increment(inverse_transform(synthesize_step(spec, GridSpec(n)))));

    auto inc = csv("increments.csv", {"time_label", "t", "n_modes", "max_increment"});
    auto boxes = csv("box_counts.csv", {"time_label", "t", "component", "eps", "box_count"});
    auto dims = csv("dimensions.csv", {"time_label", "t", "component", "dimension", "r_squared"});
    json per_time = json::array();
    for (const auto& row : rows) {
      const double t = row.time.seconds();
      for (const auto& s : row.increments) inc.row(row.time.label, t, static_cast<std::uint64_t>(s.n_modes), s.max_increment);
      auto emit = [&](const char* comp, const DimensionEstimate& d) {
        for (const auto& [eps, n] : d.counts) boxes.row(row.time.label, t, comp, eps, n);
        dims.row(row.time.label, t, comp, d.dimension, d.r_squared);
      };
      emit("re", row.dim_real);
      if (!row.imag_flat) emit("im", row.dim_imag);
      json jt;
      jt["label"] = row.time.label;
      jt["t"] = t;
      jt["rational"] = row.time.rational.has_value();
      jt["dimension"] = row.dimension;
      jt["refinement_ratio"] = row.refinement_ratio();
      per_time.push_back(jt);
      if (row.time.seconds() == 0.0 || row.increments.size() < 2) continue;
      if (row.time.rational) {
        const double rel = row.increments.back().max_increment / initial.back() - 1.0;
        outcome_.gates.push_back(gate_within("increment_vs_initial_jump[" + row.time.label + "]", rel, -0.2, 0.2));
      } else {
        outcome_.gates.push_back(gate_at_least("increment_refinement_ratio[" + row.time.label + "]", row.refinement_ratio(), 2.0));
      }
    }
    results_["times"] = per_time;
  }

  void run_smoothing() {
    const auto g = datum(grid());
    const double t = m_.times.front().seconds();
    log("smoothing study at t = " + short_number(t) + ", dt from " + short_number(m_.solver.dt));
    const auto study = smoothing_study(g, t, m_.solver, m_.smoothing.max_halvings, m_.smoothing.tolerance);
    {
      auto w = csv("smoothing.csv", {"dt", "linear_exponent", "remainder_exponent", "gain", "remainder_r_squared", "mass_drift"});
      for (const auto& s : study.steps) {
        w.row(s.dt, s.linear.exponent, s.remainder.exponent, s.gain, s.remainder.r_squared, s.mass_drift);
      }
    }
    {
      const auto& fin = study.final_step();
      const double P = 2.0 * g.coeff_energy();
      const auto lin = std::polar(1.0, P * t) * linear_propagate(g, t);
      auto w = csv("spectrum.csv", {"k", "abs_linear", "abs_remainder"});
      for (auto k = g.grid().min_mode(); k <= g.grid().max_mode(); ++k) {
        w.row(k, std::abs(lin.coeff(k)), std::abs(fin.remainder_field.coeff(k)));
      }
    }
    const auto& fin = study.final_step();
    results_["dt"] = fin.dt;
    results_["converged"] = study.converged;
    results_["linear_exponent"] = fin.linear.exponent;
    results_["remainder_exponent"] = fin.remainder.exponent;
    outcome_.gates.push_back(gate_at_least("decay_gain", fin.gain, m_.smoothing.min_gain));
  }

  void run_lemma_scan() {
    const auto& pairs = m_.lemma_scan.pairs;
    const auto& ranges = m_.lemma_scan.k_ranges;
    std::vector<LemmaScanResult> res(pairs.size() * ranges.size());
    log("scanning " + std::to_string(res.size()) + " (beta, gamma, k_range) cases");
    parallel_for(res.size(), opt_.threads, [&](std::size_t i) {
      const auto& [b, gm] = pairs[i / ranges.size()];
      res[i] = lemma1_ratio_scan(b, gm, ranges[i % ranges.size()]);
    });
    auto w = csv("lemma_scan.csv", {"beta", "gamma", "k_range", "sup_ratio", "argmax_k1", "argmax_k2", "tail_bound",
                                    "ratio_uncertainty"});
    results_["sup_ratio"] = json::array();
    for (const auto& r : res) {
      w.row(r.beta, r.gamma, r.k_range, r.sup_ratio, r.argmax_k1, r.argmax_k2, r.tail_bound, r.ratio_uncertainty);
      results_["sup_ratio"].push_back({{"beta", r.beta}, {"gamma", r.gamma}, {"k_range", r.k_range}, {"value", r.sup_ratio}});
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t k = 0; k + 1 < ranges.size(); ++k) {
        const auto& a = res[p * ranges.size() + k];
        const auto& b = res[p * ranges.size() + k + 1];
        outcome_.gates.push_back(gate_within("sup_ratio_stability[" + short_number(a.beta) + ":" + short_number(a.gamma) + "," +
                                                 std::to_string(a.k_range) + "->" + std::to_string(b.k_range) + "]",
                                             a.sup_ratio / b.sup_ratio, 0.9, 1.1));
      }
    }
  }

  void run_picard() {
    const auto g = datum(grid());
    const double t = m_.times.front().seconds();
    log("first Picard iterate on " + std::to_string(m_.n_modes) + " modes");
    const auto pic = picard_iterate(g, t);
    SolverConfig cfg = m_.solver;
    cfg.snapshot_times = {t};
    std::vector<double> dev;
    for (const double eps : m_.picard.amplitudes) {
      const cplx e(eps, 0.0);
      const auto ge = e * g;
      const auto u = evolve(ge, cfg).at(t).field;
      const auto rem = nonlinear_remainder(ge, u, t);
      const auto model = (e * e * e) * pic;
      dev.push_back((rem - model).l2_norm() / model.l2_norm());
    }
    auto w = csv("picard.csv", {"amplitude", "relative_deviation"});
    results_["relative_deviation"] = json::array();
    for (std::size_t i = 0; i < dev.size(); ++i) {
      w.row(m_.picard.amplitudes[i], dev[i]);
      results_["relative_deviation"].push_back({{"amplitude", m_.picard.amplitudes[i]}, {"value", dev[i]}});
    }
    for (std::size_t i = 0; i + 1 < dev.size(); ++i) {
      const double r = m_.picard.amplitudes[i + 1] / m_.picard.amplitudes[i];
      outcome_.gates.push_back(gate_below("deviation_ratio[" + short_number(m_.picard.amplitudes[i]) + "->" +
                                              short_number(m_.picard.amplitudes[i + 1]) + "]",
                                          dev[i + 1] / dev[i], 1.4 * r * r, false));
    }
  }

  void write_summary() {
    json s;
    s["experiment"] = to_string(m_.experiment);
    s["manifest_digest"] = "fnv1a64:" + digest_;
    s["status"] = outcome_.status;
    s["gates"] = json::array();
    for (const auto& g : outcome_.gates) s["gates"].push_back(gate_json(g));
    s["results"] = results_;
    s["artifacts"] = json::array();
    for (const auto& a : outcome_.artifacts) s["artifacts"].push_back(a.filename().string());
    const auto path = dir_ / "summary.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << s.dump(2) << "\n";
    outcome_.artifacts.push_back(path);
  }

  const RunManifest& m_;
  RunOptions opt_;
  fs::path dir_;
  std::string digest_;
  RunOutcome outcome_;
  json results_ = json::object();
};

}  // namespace

RunOutcome run(const RunManifest& m, const RunOptions& options) { return Run(m, options).execute(); }

}  // namespace talbot::harness
