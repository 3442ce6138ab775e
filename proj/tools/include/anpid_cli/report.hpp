#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anpid/sim.hpp"

namespace anpid::cli {

inline constexpr std::string_view kCsvHeader =
    "algorithm,channel,M,N,modulation,esno_db,iteration,symbol_errors,symbols_total,ser,wall_time_s";

/// Run metadata stored next to the CSV.
struct Manifest {
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string code_version;
  std::string experiment;
  std::string profile;
  std::vector<TrialFailure> failures;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

/// CSV body (header plus one line per record) exactly as emit_csv writes it.
std::string format_csv(std::span<const SerRecord> records);

/// `results.csv` -> `results.manifest.json`.
std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its sibling manifest. Throws std::runtime_error naming
/// the path on any I/O failure, or when `records` is empty.
void emit_csv(std::span<const SerRecord> records, const std::filesystem::path& path,
              const Manifest& manifest);

/// One parsed CSV row, used for round-trip checks.
struct CsvRow {
  std::string algorithm;
  std::string channel;
  std::size_t M = 0;
  std::size_t N = 0;
  unsigned modulation = 0;
  double esno_db = 0.0;
  std::size_t iteration = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t symbols_total = 0;
  double ser = 0.0;
  double wall_time = 0.0;
};

/// Parses text produced by format_csv. Throws std::runtime_error on a
/// malformed header or row.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Drops the wall_time_s column so two runs can be compared byte for byte.
std::string strip_wall_time(std::string_view csv);

}  // namespace anpid::cli
