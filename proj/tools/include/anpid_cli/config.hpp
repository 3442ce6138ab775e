#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "anpid/sim.hpp"

namespace anpid::cli {

enum class Experiment { ser_vs_iteration, ser_vs_load, ser_vs_esno, bounds_only };
enum class Profile { full, fast };

std::string_view to_string(Experiment e) noexcept;
std::string_view to_string(Profile p) noexcept;

struct RunConfig {
  Experiment experiment = Experiment::ser_vs_iteration;
  SweepSpec sweep;
  std::filesystem::path output_path = "results.csv";
  Profile profile = Profile::full;
};

/// Malformed document. `what()` reads "parse-error: line L: ...".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed document with a bad value. `what()` reads
/// "validation-error: ..." and names the field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& detail);
};

/// Parses a JSON run configuration. Every key is optional; missing keys take
/// the defaults documented in README.md. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);

/// Reads and parses `path`. A missing or unreadable file is a ParseError at
/// line 0 naming the path.
RunConfig load_config(const std::filesystem::path& path);

/// Shrinks a configuration to the quick-look size: M = 64, every N scaled by
/// 64 / M (at least 1), trials capped at kFastTrials. No-op for M <= 64.
void apply_fast_profile(RunConfig& config);

inline constexpr std::size_t kFastTrials = 200;

/// Checks the experiment-specific shape on top of SweepSpec::validate.
void validate(const RunConfig& config);

}  // namespace anpid::cli
