// anpid-sim: runs one SER experiment described by a JSON config and writes a
// CSV plus a manifest. Exit codes: 0 success, 2 config error, 3 runtime error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "anpid/detectors.hpp"
#include "anpid_cli/config.hpp"
#include "anpid_cli/report.hpp"
#include "anpid_cli/run.hpp"

#ifndef ANPID_VERSION
#define ANPID_VERSION "unknown"
#endif

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string algorithm_list() {
  std::string out;
  for (const anpid::Algorithm a : anpid::all_algorithms()) {
    if (!out.empty()) out += ", ";
    out += anpid::to_string(a);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace anpid::cli;

  CLI::App app{"Monte Carlo SER simulator for iterative large-MIMO detectors"};
  app.footer("Algorithms: " + algorithm_list() +
             "\nExperiments: ser_vs_iteration, ser_vs_load, ser_vs_esno, bounds_only"
             "\nExit codes: 0 success, 2 config error, 3 runtime error");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string profile;
  std::string out_path;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--profile", profile, "fast or full (overrides the config)")
      ->check(CLI::IsMember({"fast", "full"}));
  app.add_option("--out", out_path, "CSV output path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  std::string text;
  RunConfig config;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot read " + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    config = parse_config(text);
    if (seed) config.sweep.master_seed = *seed;
    if (!out_path.empty()) config.output_path = out_path;
    if (profile == "fast" || (profile.empty() && config.profile == Profile::fast)) {
      apply_fast_profile(config);
      validate(config);
    } else if (profile == "full") {
      config.profile = Profile::full;
    }
  } catch (const std::exception& e) {
    std::cerr << "anpid-sim: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const anpid::SweepResult result = run_experiment(config);
    Manifest manifest;
    manifest.config_hash = fnv1a(text);
    manifest.master_seed = config.sweep.master_seed;
    manifest.code_version = ANPID_VERSION;
    manifest.experiment = std::string(to_string(config.experiment));
    manifest.profile = std::string(to_string(config.profile));
    manifest.failures = result.failures;
    emit_csv(result.records, config.output_path, manifest);
    if (!result.failures.empty()) {
      std::cerr << "anpid-sim: " << result.failures.size() << " trial(s) failed; first: "
                << result.failures.front().algorithm << ": " << result.failures.front().message
                << '\n';
      return kRuntimeError;
    }
    std::cout << "wrote " << result.records.size() << " records to " << config.output_path.string()
              << '\n';
  } catch (const std::exception& e) {
    std::cerr << "anpid-sim: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
