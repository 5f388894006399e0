#include "talbot/harness/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace talbot::harness {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"", {"version", "experiment", "seed"}},
      {"datum", {"kind", "breakpoints", "values", "amplitude", "modes", "max_mode"}},
      {"grid", {"n_modes"}},
      {"solver", {"dt", "dealias", "energy_stride", "linear_shift"}},
      {"times", {"list"}},
      {"output", {"dir"}},
      {"evolve", {"mass_tolerance", "max_halvings"}},
      {"quantize", {"denominators"}},
      {"dichotomy", {"resolutions", "flow", "rule", "composite_fine", "composite_coarse"}},
      {"smoothing", {"max_halvings", "tolerance", "min_gain"}},
      {"lemma-scan", {"pairs", "k_ranges"}},
      {"picard-check", {"amplitudes"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_plain_real(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

// A real number, optionally a multiple of pi: "1.5", "pi", "2pi", "pi/3", "2*pi/3".
std::optional<double> parse_real(std::string_view raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return parse_plain_real(s);
  std::string coef = trim(std::string_view(s).substr(0, pos));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (!coef.empty()) {
    auto v = parse_plain_real(coef);
    if (!v) return std::nullopt;
    c = *v;
  }
  double d = 1.0;
  const std::string rest = trim(std::string_view(s).substr(pos + 2));
  if (!rest.empty()) {
    if (rest.front() != '/') return std::nullopt;
    auto v = parse_plain_real(trim(rest.substr(1)));
    if (!v || *v == 0.0) return std::nullopt;
    d = *v;
  }
  return c * kPi / d;
}

std::optional<std::int64_t> parse_int(std::string_view raw) {
  const std::string s = trim(raw);
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

class Reader {
 public:
  explicit Reader(std::vector<ManifestError>& errors) : errors_(errors) {}

  void parse(std::string_view text) {
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      const auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
      start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      std::string line = trim(raw);
      if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(line_no, line, "malformed section header");
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        if (!schema().count(section)) {
          std::vector<std::string> names;
          for (const auto& [k, _] : schema()) {
            if (!k.empty()) names.push_back(k);
          }
          std::string msg = "unknown section";
          if (auto s = suggest(section, names)) msg += " (did you mean \"" + *s + "\"?)";
          error(line_no, "[" + section + "]", msg);
          section = "\x01";  // swallow its keys
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        error(line_no, line, "expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section == "\x01") continue;
      const auto& known = schema().at(section);
      const std::string field = qualified(section, key);
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        std::string msg = "unknown key";
        if (auto s = suggest(key, known)) msg += " (did you mean \"" + *s + "\"?)";
        error(line_no, field, msg);
        continue;
      }
      auto& sec = sections_[section];
      if (sec.count(key)) {
        error(line_no, field, "duplicate key (first set on line " + std::to_string(sec[key].line) + ")");
        continue;
      }
      sec[key] = {value, line_no};
    }
  }

  const Entry* get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  void error(int line, std::string field, std::string msg) { errors_.push_back({line, std::move(field), std::move(msg)}); }

  static std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  template <class T, class Parse>
  void read(const std::string& section, const std::string& key, T& target, Parse parse, const char* expected) {
    const Entry* e = get(section, key);
    if (!e) return;
    if (auto v = parse(e->value)) {
      target = *v;
    } else {
      error(e->line, qualified(section, key), std::string("expected ") + expected + ", got \"" + e->value + "\"");
    }
  }

  template <class T, class Parse>
  void read_list(const std::string& section, const std::string& key, std::vector<T>& target, Parse parse,
                 const char* expected) {
    const Entry* e = get(section, key);
    if (!e) return;
    std::vector<T> out;
    for (const auto& item : split_list(e->value)) {
      auto v = parse(item);
      if (!v) {
        error(e->line, qualified(section, key), std::string("expected a list of ") + expected + ", bad item \"" + item + "\"");
        return;
      }
      out.push_back(*v);
    }
    target = std::move(out);
  }

  int line_of(const std::string& section, const std::string& key) const {
    const Entry* e = get(section, key);
    return e ? e->line : 0;
  }

 private:
  std::vector<ManifestError>& errors_;
  std::map<std::string, Section> sections_;
};

std::optional<std::size_t> parse_size(std::string_view s) {
  auto v = parse_int(s);
  if (!v || *v < 0) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

// Integers, with "a..b" ranges.
std::optional<std::vector<std::int64_t>> parse_int_ranges(std::string_view s) {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(s)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      auto v = parse_int(item);
      if (!v) return std::nullopt;
      out.push_back(*v);
      continue;
    }
    auto a = parse_int(item.substr(0, dots));
    auto b = parse_int(item.substr(dots + 2));
    if (!a || !b || *b < *a || *b - *a > 1000000) return std::nullopt;
    for (auto v = *a; v <= *b; ++v) out.push_back(v);
  }
  return out;
}

std::optional<TaggedTime> parse_time(std::string_view raw, std::string& why) {
  const std::string s = trim(raw);
  if (auto preset = find_preset(s)) return preset;
  if (const auto slash = s.find('/'); slash != std::string::npos && s.find("pi") == std::string::npos) {
    auto p = parse_int(s.substr(0, slash));
    auto q = parse_int(s.substr(slash + 1));
    if (!p || !q) {
      why = "rational times are written p/q with integers";
      return std::nullopt;
    }
    if (*q == 0) {
      why = "denominator must be nonzero";
      return std::nullopt;
    }
    std::int64_t pp = *p, qq = *q;
    if (qq < 0) {
      pp = -pp;
      qq = -qq;
    }
    if (pp < 0) {
      why = "times must be >= 0";
      return std::nullopt;
    }
    return TaggedTime::from_rational(RationalTime::reduced(pp, qq));
  }
  auto v = parse_real(s);
  if (!v) {
    std::vector<std::string> names;
    for (const auto& p : irrational_presets()) names.push_back(p.label);
    why = "expected p/q, a preset name or a real number of seconds";
    if (auto sug = suggest(s, names)) why += " (did you mean \"" + *sug + "\"?)";
    return std::nullopt;
  }
  if (*v < 0.0) {
    why = "times must be >= 0";
    return std::nullopt;
  }
  return TaggedTime{fmt(*v), *v / kTwoPi, std::nullopt};
}

std::string render_time(const TaggedTime& t) {
  if (t.rational) return t.rational->to_string();
  if (find_preset(t.label)) return t.label;
  return fmt(t.seconds());
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::evolve:
      return "evolve";
    case Experiment::quantize:
      return "quantize";
    case Experiment::dichotomy:
      return "dichotomy";
    case Experiment::smoothing:
      return "smoothing";
    case Experiment::lemma_scan:
      return "lemma-scan";
    case Experiment::picard_check:
      return "picard-check";
  }
  return "evolve";
}

std::optional<Experiment> parse_experiment(std::string_view s) {
  for (auto e : {Experiment::evolve, Experiment::quantize, Experiment::dichotomy, Experiment::smoothing,
                 Experiment::lemma_scan, Experiment::picard_check}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

std::string ManifestError::format() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  out += field + ": " + message;
  return out;
}

ManifestInvalid::ManifestInvalid(std::vector<ManifestError> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid manifest";
        for (const auto& e : errors) msg += "\n  " + e.format();
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::optional<std::string> suggest(std::string_view key, const std::vector<std::string>& candidates) {
  const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
  std::optional<std::string> best;
  std::size_t best_d = limit + 1;
  for (const auto& c : candidates) {
    const auto d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunManifest parse_manifest(std::string_view text, std::optional<Experiment> experiment_hint) {
  std::vector<ManifestError> errors;
  Reader r(errors);
  r.parse(text);
  RunManifest m;

  if (const Entry* v = r.get("", "version")) {
    if (trim(v->value) != "1") r.error(v->line, "version", "unsupported version \"" + v->value + "\" (expected 1)");
  } else {
    r.error(0, "version", "missing (the first line should be 'version = 1')");
  }

  if (const Entry* e = r.get("", "experiment")) {
    if (auto ex = parse_experiment(trim(e->value))) {
      m.experiment = *ex;
      if (experiment_hint && *experiment_hint != *ex) {
        r.error(e->line, "experiment",
                "manifest declares \"" + e->value + "\" but the command runs \"" + std::string(to_string(*experiment_hint)) + "\"");
      }
    } else {
      std::vector<std::string> names{"evolve", "quantize", "dichotomy", "smoothing", "lemma-scan", "picard-check"};
      std::string msg = "unknown experiment \"" + e->value + "\"";
      if (auto s = suggest(trim(e->value), names)) msg += " (did you mean \"" + *s + "\"?)";
      r.error(e->line, "experiment", msg);
    }
  } else if (experiment_hint) {
    m.experiment = *experiment_hint;
  } else {
    r.error(0, "experiment", "missing");
  }

  r.read("", "seed", m.seed, [](std::string_view s) -> std::optional<std::uint64_t> {
    auto v = parse_int(s);
    if (!v || *v < 0) return std::nullopt;
    return static_cast<std::uint64_t>(*v);
  }, "a nonnegative integer");

  // datum
  if (const Entry* k = r.get("datum", "kind")) {
    const auto kind = trim(k->value);
    if (kind == "step") {
      m.datum.kind = DatumKind::step;
    } else if (kind == "band-limited") {
      m.datum.kind = DatumKind::band_limited;
    } else {
      r.error(k->line, "datum.kind", "expected step or band-limited, got \"" + k->value + "\"");
    }
  }
  r.read("datum", "amplitude", m.datum.amplitude, parse_real, "a real number");
  {
    std::vector<double> bps = m.datum.step.breakpoints;
    std::vector<double> vals;
    for (const auto& v : m.datum.step.values) vals.push_back(v.real());
    r.read_list("datum", "breakpoints", bps, parse_real, "reals (pi multiples allowed)");
    r.read_list("datum", "values", vals, parse_real, "reals");
    m.datum.step.breakpoints = bps;
    m.datum.step.values.assign(vals.begin(), vals.end());
    if (m.datum.kind == DatumKind::step) {
      try {
        m.datum.step.validate();
      } catch (const std::invalid_argument& e) {
        r.error(r.line_of("datum", "breakpoints"), "datum.breakpoints", e.what());
      }
    }
  }
  r.read("datum", "max_mode", m.datum.max_mode, parse_int, "an integer");
  if (const Entry* e = r.get("datum", "modes")) {
    m.datum.modes.clear();
    for (const auto& item : split_list(e->value)) {
      const auto colon = item.find(':');
      auto k = colon == std::string::npos ? std::nullopt : parse_int(item.substr(0, colon));
      auto a = colon == std::string::npos ? std::nullopt : parse_real(item.substr(colon + 1));
      if (!k || !a) {
        r.error(e->line, "datum.modes", "expected k:coefficient pairs, bad item \"" + item + "\"");
        break;
      }
      m.datum.modes.emplace_back(*k, *a);
    }
  }

  // grid
  r.read("grid", "n_modes", m.n_modes, parse_size, "a power of two >= 8");
  if (!is_power_of_two(m.n_modes)) {
    r.error(r.line_of("grid", "n_modes"), "grid.n_modes", "must be a power of two >= 8, got " + std::to_string(m.n_modes));
  }
  if (m.datum.kind == DatumKind::band_limited) {
    const auto half = static_cast<std::int64_t>(m.n_modes / 2);
    for (const auto& [k, a] : m.datum.modes) {
      if (k < -half || k >= half) r.error(r.line_of("datum", "modes"), "datum.modes", "mode " + std::to_string(k) + " is outside the grid");
    }
    if (m.datum.modes.empty() && (m.datum.max_mode < 0 || m.datum.max_mode >= half)) {
      r.error(r.line_of("datum", "max_mode"), "datum.max_mode", "must lie in [0, n_modes/2)");
    }
  }

  // solver
  r.read("solver", "dt", m.solver.dt, parse_real, "a real number");
  if (const Entry* e = r.get("solver", "dealias")) {
    if (auto d = parse_dealias(trim(e->value))) {
      m.solver.dealias = *d;
    } else {
      std::string msg = "expected two-thirds-rule, zero-padding-2x or none, got \"" + e->value + "\"";
      if (auto s = suggest(trim(e->value), {"two-thirds-rule", "zero-padding-2x", "none"})) msg += " (did you mean \"" + *s + "\"?)";
      r.error(e->line, "solver.dealias", msg);
    }
  }
  r.read("solver", "energy_stride", m.solver.energy_stride, parse_size, "a nonnegative integer");
  r.read("solver", "linear_shift", m.solver.linear_shift, parse_real, "a real number");
  try {
    m.solver.validate();
  } catch (const std::invalid_argument& e) {
    r.error(r.line_of("solver", "dt"), "solver.dt", e.what());
  }

  // times
  if (const Entry* e = r.get("times", "list")) {
    std::set<std::string> seen;
    for (const auto& item : split_list(e->value)) {
      if (item.empty()) continue;
      std::string why;
      auto t = parse_time(item, why);
      if (!t) {
        r.error(e->line, "times.list", "bad time \"" + item + "\": " + why);
        continue;
      }
      if (!seen.insert(render_time(*t)).second) {
        r.error(e->line, "times.list", "duplicate time \"" + item + "\"");
        continue;
      }
      m.times.push_back(*t);
    }
  }

  r.read("output", "dir", m.output_dir, [](std::string_view s) -> std::optional<std::string> {
    auto t = trim(s);
    if (t.empty()) return std::nullopt;
    return t;
  }, "a directory path");

  // experiment parameters
  r.read("evolve", "mass_tolerance", m.evolve.mass_tolerance, parse_real, "a real number");
  r.read("evolve", "max_halvings", m.evolve.max_halvings, parse_size, "a nonnegative integer");
  if (const Entry* e = r.get("quantize", "denominators")) {
    if (auto v = parse_int_ranges(e->value)) {
      m.quantize.denominators = *v;
      for (auto q : *v) {
        if (q < 1 || q > 4096) r.error(e->line, "quantize.denominators", "denominator " + std::to_string(q) + " outside [1, 4096]");
      }
    } else {
      r.error(e->line, "quantize.denominators", "expected integers or ranges a..b");
    }
  }
  r.read_list("dichotomy", "resolutions", m.dichotomy.resolutions, parse_size, "powers of two");
  for (const auto n : m.dichotomy.resolutions) {
    if (!is_power_of_two(n)) r.error(r.line_of("dichotomy", "resolutions"), "dichotomy.resolutions", std::to_string(n) + " is not a power of two >= 8");
  }
  if (m.dichotomy.resolutions.empty()) r.error(r.line_of("dichotomy", "resolutions"), "dichotomy.resolutions", "at least one resolution required");
  if (!std::is_sorted(m.dichotomy.resolutions.begin(), m.dichotomy.resolutions.end())) {
    r.error(r.line_of("dichotomy", "resolutions"), "dichotomy.resolutions", "must be increasing");
  }
  if (const Entry* e = r.get("dichotomy", "flow")) {
    const auto v = trim(e->value);
    if (v == "linear") {
      m.dichotomy.flow = Flow::linear;
    } else if (v == "nonlinear") {
      m.dichotomy.flow = Flow::nonlinear;
    } else {
      r.error(e->line, "dichotomy.flow", "expected linear or nonlinear, got \"" + e->value + "\"");
    }
  }
  if (const Entry* e = r.get("dichotomy", "rule")) {
    const auto v = trim(e->value);
    if (v == "oscillation") {
      m.dichotomy.rule = CountRule::oscillation;
    } else if (v == "lattice") {
      m.dichotomy.rule = CountRule::lattice;
    } else {
      r.error(e->line, "dichotomy.rule", "expected oscillation or lattice, got \"" + e->value + "\"");
    }
  }
  r.read("dichotomy", "composite_fine", m.dichotomy.composite_fine, parse_size, "0 or a power of two");
  r.read("dichotomy", "composite_coarse", m.dichotomy.composite_coarse, parse_size, "a power of two");
  if (m.dichotomy.composite_fine != 0 &&
      (!is_power_of_two(m.dichotomy.composite_fine) || !is_power_of_two(m.dichotomy.composite_coarse) ||
       m.dichotomy.composite_fine < m.dichotomy.composite_coarse)) {
    r.error(r.line_of("dichotomy", "composite_fine"), "dichotomy.composite_fine",
            "composite grids must be powers of two with fine >= coarse");
  }
  r.read("smoothing", "max_halvings", m.smoothing.max_halvings, parse_size, "a nonnegative integer");
  r.read("smoothing", "tolerance", m.smoothing.tolerance, parse_real, "a real number");
  r.read("smoothing", "min_gain", m.smoothing.min_gain, parse_real, "a real number");
  if (const Entry* e = r.get("lemma-scan", "pairs")) {
    m.lemma_scan.pairs.clear();
    for (const auto& item : split_list(e->value)) {
      const auto colon = item.find(':');
      auto b = colon == std::string::npos ? std::nullopt : parse_real(item.substr(0, colon));
      auto g = colon == std::string::npos ? std::nullopt : parse_real(item.substr(colon + 1));
      if (!b || !g) {
        r.error(e->line, "lemma-scan.pairs", "expected beta:gamma pairs, bad item \"" + item + "\"");
        break;
      }
      if (!(*b >= *g && *g >= 0.0 && *b + *g > 1.0)) {
        r.error(e->line, "lemma-scan.pairs", "pair " + item + " violates beta >= gamma >= 0, beta + gamma > 1");
      }
      m.lemma_scan.pairs.emplace_back(*b, *g);
    }
  }
  r.read_list("lemma-scan", "k_ranges", m.lemma_scan.k_ranges, parse_int, "positive integers");
  for (auto k : m.lemma_scan.k_ranges) {
    if (k < 1 || k > 4096) r.error(r.line_of("lemma-scan", "k_ranges"), "lemma-scan.k_ranges", "k_range " + std::to_string(k) + " outside [1, 4096]");
  }
  r.read_list("picard-check", "amplitudes", m.picard.amplitudes, parse_real, "reals");

  // Experiment-specific requirements.
  const int times_line = r.line_of("times", "list");
  switch (m.experiment) {
    case Experiment::evolve:
      if (m.times.empty()) r.error(times_line, "times.list", "at least one time is required");
      break;
    case Experiment::dichotomy:
      if (m.times.empty()) r.error(times_line, "times.list", "at least one time is required");
      if (m.datum.kind != DatumKind::step) r.error(r.line_of("datum", "kind"), "datum.kind", "dichotomy needs a step datum");
      break;
    case Experiment::smoothing:
      if (m.times.size() != 1) r.error(times_line, "times.list", "exactly one time is required");
      break;
    case Experiment::picard_check:
      if (m.times.size() != 1) r.error(times_line, "times.list", "exactly one time is required");
      if (m.n_modes > 512) r.error(r.line_of("grid", "n_modes"), "grid.n_modes", "picard-check needs n_modes <= 512");
      if (m.picard.amplitudes.empty()) r.error(r.line_of("picard-check", "amplitudes"), "picard-check.amplitudes", "at least one amplitude required");
      break;
    case Experiment::quantize:
      if (m.times.empty() && m.quantize.denominators.empty()) {
        r.error(times_line, "times.list", "at least one rational time (or quantize.denominators) is required");
      }
      for (const auto& t : m.times) {
        if (!t.rational) r.error(times_line, "times.list", "quantize needs rational times p/q, got \"" + t.label + "\"");
      }
      break;
    case Experiment::lemma_scan:
      if (m.lemma_scan.pairs.empty() || m.lemma_scan.k_ranges.empty()) {
        r.error(r.line_of("lemma-scan", "pairs"), "lemma-scan.pairs", "at least one pair and one k_range required");
      }
      break;
  }

  if (!errors.empty()) throw ManifestInvalid(std::move(errors));
  return m;
}

RunManifest load_manifest(const std::string& path, std::optional<Experiment> experiment_hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestInvalid({{0, "manifest", "cannot read \"" + path + "\""}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), experiment_hint);
}

namespace {

std::string render_body(const RunManifest& m, bool with_output) {
  std::ostringstream o;
  o << "version = " << m.version << "\n";
  o << "experiment = " << to_string(m.experiment) << "\n";
  o << "seed = " << m.seed << "\n";
  o << "\n[datum]\n";
  if (m.datum.kind == DatumKind::step) {
    o << "kind = step\n";
    o << "breakpoints = " << join(m.datum.step.breakpoints, [](double x) { return fmt(x); }) << "\n";
    o << "values = " << join(m.datum.step.values, [](cplx v) { return fmt(v.real()); }) << "\n";
  } else {
    o << "kind = band-limited\n";
    if (m.datum.modes.empty()) {
      o << "max_mode = " << m.datum.max_mode << "\n";
    } else {
      o << "modes = "
        << join(m.datum.modes, [](const std::pair<std::int64_t, double>& p) { return std::to_string(p.first) + ":" + fmt(p.second); })
        << "\n";
    }
  }
  o << "amplitude = " << fmt(m.datum.amplitude) << "\n";
  o << "\n[grid]\nn_modes = " << m.n_modes << "\n";
  o << "\n[solver]\n";
  o << "dt = " << fmt(m.solver.dt) << "\n";
  o << "dealias = " << to_string(m.solver.dealias) << "\n";
  o << "energy_stride = " << m.solver.energy_stride << "\n";
  o << "linear_shift = " << fmt(m.solver.linear_shift) << "\n";
  o << "\n[times]\nlist = " << join(m.times, render_time) << "\n";
  if (with_output) o << "\n[output]\ndir = " << m.output_dir << "\n";
  switch (m.experiment) {
    case Experiment::evolve:
      o << "\n[evolve]\nmass_tolerance = " << fmt(m.evolve.mass_tolerance) << "\nmax_halvings = " << m.evolve.max_halvings
        << "\n";
      break;
    case Experiment::quantize:
      o << "\n[quantize]\ndenominators = " << join(m.quantize.denominators, [](std::int64_t q) { return std::to_string(q); })
        << "\n";
      break;
    case Experiment::dichotomy:
      o << "\n[dichotomy]\nresolutions = " << join(m.dichotomy.resolutions, [](std::size_t n) { return std::to_string(n); })
        << "\nflow = " << (m.dichotomy.flow == Flow::linear ? "linear" : "nonlinear") << "\nrule = " << to_string(m.dichotomy.rule)
        << "\ncomposite_fine = " << m.dichotomy.composite_fine << "\ncomposite_coarse = " << m.dichotomy.composite_coarse << "\n";
      break;
    case Experiment::smoothing:
      o << "\n[smoothing]\nmax_halvings = " << m.smoothing.max_halvings << "\ntolerance = " << fmt(m.smoothing.tolerance)
        << "\nmin_gain = " << fmt(m.smoothing.min_gain) << "\n";
      break;
    case Experiment::lemma_scan:
      o << "\n[lemma-scan]\npairs = "
        << join(m.lemma_scan.pairs, [](const std::pair<double, double>& p) { return fmt(p.first) + ":" + fmt(p.second); })
        << "\nk_ranges = " << join(m.lemma_scan.k_ranges, [](std::int64_t k) { return std::to_string(k); }) << "\n";
      break;
    case Experiment::picard_check:
      o << "\n[picard-check]\namplitudes = " << join(m.picard.amplitudes, [](double a) { return fmt(a); }) << "\n";
      break;
  }
  return o.str();
}

}  // namespace

std::string render_manifest(const RunManifest& m) { return render_body(m, true); }

std::string manifest_digest(const RunManifest& m) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(render_body(m, false))));
  return buf;
}

FourierField build_datum(const DatumSpec& d, GridSpec grid, std::uint64_t seed) {
  if (d.kind == DatumKind::step) return synthesize_step(d.step.scaled(d.amplitude), grid);
  FourierField u(grid);
  if (!d.modes.empty()) {
    for (const auto& [k, a] : d.modes) u.coeff(k) += d.amplitude * a;
    return u;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::int64_t k = -d.max_mode; k <= d.max_mode; ++k) {
    const double re = uni(rng);
    const double im = uni(rng);
    if (grid.contains(k)) u.coeff(k) = d.amplitude * cplx(re, im) / (1.0 + std::abs(static_cast<double>(k)));
  }
  return u;
}

}  // namespace talbot::harness
