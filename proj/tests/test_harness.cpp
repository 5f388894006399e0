#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "talbot/harness/csv.hpp"
#include "talbot/harness/experiments.hpp"
#include "talbot/harness/manifest.hpp"

using namespace talbot;
using namespace talbot::harness;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("talbot-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<ManifestError> errors_of(const std::string& text) {
  try {
    (void)parse_manifest(text);
  } catch (const ManifestInvalid& e) {
    return e.errors();
  }
  return {};
}

const char* kQuantize =
    "version = 1\n"
    "experiment = quantize\n"
    "[grid]\n"
    "n_modes = 256\n"
    "[times]\n"
    "list = 1/3, 2/4\n"
    "[quantize]\n"
    "denominators = 5\n";

}  // namespace

TEST_CASE("manifest: minimal manifest gets defaults") {
  const auto m = parse_manifest("version = 1\nexperiment = evolve\n[times]\nlist = 1/4\n");
  CHECK(m.n_modes == 4096);
  CHECK(m.solver.dt == 1e-3);
  CHECK(m.solver.dealias == Dealias::zero_padding);
  CHECK(m.datum.kind == DatumKind::step);
  REQUIRE(m.times.size() == 1);
  CHECK(m.times[0].rational == RationalTime(1, 4));
  CHECK(render_manifest(m).find("n_modes = 4096") != std::string::npos);
}

TEST_CASE("manifest: rational times are reduced and pi expressions accepted") {
  const auto m = parse_manifest(kQuantize);
  CHECK(m.times[1].rational == RationalTime(1, 2));
  CHECK(m.times[1].label == "1/2");
  const auto e = parse_manifest("version = 1\nexperiment = evolve\n[times]\nlist = 0.5, sqrt2\n"
                                "[datum]\nbreakpoints = 0, 2pi/3\nvalues = 1, -1\n");
  CHECK(e.datum.step.breakpoints[1] == doctest::Approx(2 * kPi / 3));
  CHECK(e.times[0].seconds() == 0.5);
  CHECK(e.times[1].label == "sqrt2");
}

TEST_CASE("manifest: errors carry line, field and suggestion") {
  const auto errs = errors_of("version = 1\nexperiment = evolve\n[solver]\ndealais = none\n[times]\nlist = 1/4\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].line == 4);
  CHECK(errs[0].field == "solver.dealais");
  CHECK(errs[0].message.find("did you mean \"dealias\"") != std::string::npos);

  const auto empty = errors_of("version = 1\nexperiment = evolve\n");
  REQUIRE_FALSE(empty.empty());
  CHECK(empty[0].field.find("times") != std::string::npos);

  CHECK_FALSE(errors_of("experiment = evolve\n[times]\nlist = 1\n").empty());
  CHECK_FALSE(errors_of("version = 1\nexperiment = evolve\n[grid]\nn_modes = 100\n[times]\nlist = 1\n").empty());
  CHECK_FALSE(errors_of("version = 1\nexperiment = evolve\n[times]\nlist = 1, 1\n").empty());
  CHECK_FALSE(errors_of("version = 1\nexperiment = evolve\n[solver]\ndt = 0.1\n[times]\nlist = 1\n").empty());
  CHECK_FALSE(errors_of("version = 1\nexperiment = evolve\n[sovler]\n[times]\nlist = 1\n").empty());
  CHECK_FALSE(errors_of("version = 1\nexperiment = picard-check\n[times]\nlist = 1\n").empty());
  CHECK_THROWS_AS(parse_manifest("version = 1\nexperiment = evolve\n[times]\nlist = 1\n", Experiment::quantize),
                  ManifestInvalid);
}

TEST_CASE("manifest: render round trip and digest") {
  const auto m = parse_manifest(kQuantize);
  const auto text = render_manifest(m);
  const auto again = parse_manifest(text);
  CHECK(render_manifest(again) == text);
  CHECK(manifest_digest(again) == manifest_digest(m));
  auto moved = m;
  moved.output_dir = "elsewhere";
  CHECK(manifest_digest(moved) == manifest_digest(m));
  moved.n_modes = 512;
  CHECK(manifest_digest(moved) != manifest_digest(m));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("suggestions use a bounded edit distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(suggest("dealais", {"dt", "dealias", "energy_stride"}) == std::optional<std::string>("dealias"));
  CHECK_FALSE(suggest("zzzzzz", {"dt", "dealias"}).has_value());
}

TEST_CASE("csv: headers and number formatting") {
  const auto dir = scratch("csv");
  {
    CsvWriter w(dir / "a.csv", "0123456789abcdef", "evolve", {"x", "label"});
    w.row(0.1, std::string("a,b"));
    CHECK_THROWS(w.row(1.0));
  }
  const auto text = read_file(dir / "a.csv");
  CHECK(text.rfind("# manifest-digest: fnv1a64:0123456789abcdef\n# experiment: evolve\nx,label\n", 0) == 0);
  CHECK(text.find("0.10000000000000001,\"a,b\"") != std::string::npos);
}

TEST_CASE("run: quantize writes reproducible artifacts") {
  auto m = parse_manifest(kQuantize);
  const auto dir = scratch("quantize");
  m.output_dir = dir.string();
  const std::vector<std::string> files{"coefficients.csv", "discrepancy.csv", "manifest.resolved", "summary.json"};
  CHECK(run(m, {}).exit_code == kOk);
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(read_file(dir / f));
  CHECK(run(m, {}).exit_code == kOk);
  for (std::size_t i = 0; i < files.size(); ++i) CHECK(read_file(dir / files[i]) == first[i]);
  const auto digest = manifest_digest(m);
  CHECK(first[0].find("fnv1a64:" + digest) != std::string::npos);
  const auto summary = nlohmann::json::parse(first[3]);
  CHECK(summary["experiment"] == "quantize");
  CHECK(summary["status"] == "ok");
  CHECK(summary["manifest_digest"] == "fnv1a64:" + digest);
}

TEST_CASE("threads: explicit value, environment, default") {
  CHECK(resolve_threads(3u) == 3);
  ::unsetenv("TALBOT_THREADS");
  CHECK(resolve_threads(std::nullopt) == 1);
  ::setenv("TALBOT_THREADS", "2", 1);
  CHECK(resolve_threads(std::nullopt) == 2);
  ::unsetenv("TALBOT_THREADS");
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 100);
  CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}

TEST_CASE("cli: exit codes and validate output") {
  const auto dir = scratch("cli");
  const auto good = dir / "q.manifest";
  std::ofstream(good) << kQuantize;
  const auto bad = dir / "bad.manifest";
  std::ofstream(bad) << "version = 1\nexperiment = evolve\n[solver]\ndealais = none\n[times]\nlist = 1/4\n";
  const std::string cli = TALBOT_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(status(cli + " quantize --manifest " + good.string() + " --out " + (dir / "out").string() + " --quiet") == 0);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(status(cli + " evolve --manifest " + bad.string()) == kInvalidManifest);
  CHECK(status(cli + " evolve --manifest " + good.string()) == kInvalidManifest);
  CHECK(status(cli + " validate --manifest " + (dir / "missing").string()) == kInvalidManifest);

  std::FILE* p = ::popen((cli + " validate --manifest " + good.string()).c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  ::pclose(p);
  CHECK(out.rfind("# manifest-digest: fnv1a64:", 0) == 0);
  CHECK(out.find("list = 1/3, 1/2") != std::string::npos);
}
