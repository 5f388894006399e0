#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "talbot/harness/experiments.hpp"
#include "talbot/harness/manifest.hpp"

namespace h = talbot::harness;

int main(int argc, char** argv) {
  CLI::App app{"Talbot-effect experiments for the periodic cubic NLS"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string manifest_path;
  std::string out_dir;
  std::optional<unsigned> threads;
  bool quiet = false;
  app.add_option("--manifest", manifest_path, "Run manifest (key = value with [sections])")->required();
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--threads", threads, "Worker threads (default: TALBOT_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "No progress output");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"evolve", "Split-step evolution with conservation log"},
      {"quantize", "Gauss-sum translate coefficients against the exact propagator"},
      {"dichotomy", "Max increments and graph dimensions at rational and irrational times"},
      {"smoothing", "Decay exponents of the linear part and the nonlinear remainder"},
      {"lemma-scan", "Sup of the convolution-bound ratio over a mode box"},
      {"picard-check", "Remainder against the first Picard iterate at small amplitude"},
      {"validate", "Print the resolved manifest or the list of problems"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::optional<h::Experiment> hint;
  if (command != "validate") hint = h::parse_experiment(command);

  h::RunManifest manifest;
  try {
    manifest = h::load_manifest(manifest_path, hint);
  } catch (const h::ManifestInvalid& e) {
    std::cerr << manifest_path << ": " << e.what() << "\n";
    return h::kInvalidManifest;
  }
  if (!out_dir.empty()) manifest.output_dir = out_dir;

  if (command == "validate") {
    std::cout << "# manifest-digest: fnv1a64:" << h::manifest_digest(manifest) << "\n" << h::render_manifest(manifest);
    return h::kOk;
  }

  h::RunOptions options;
  options.threads = h::resolve_threads(threads);
  options.log = quiet ? nullptr : &std::cerr;
  try {
    const auto outcome = h::run(manifest, options);
    if (!quiet) {
      for (const auto& g : outcome.gates) {
        std::cerr << (g.pass ? "PASS " : "FAIL ") << g.name << " = " << g.value << "\n";
      }
      std::cerr << "status: " << outcome.status << " (" << manifest.output_dir << ")\n";
    }
    return outcome.exit_code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kIoError;
  }
}
