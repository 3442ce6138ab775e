#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anpid/channel.hpp"
#include "anpid/detectors.hpp"
#include "anpid/modem.hpp"

namespace anpid {

/// Channel description for a sweep.
///
/// Es/No is the average per-stream SNR after combining: WSSUS entries default
/// to variance 1/M so that E||h_n||^2 = 1, and ELAA realizations are scaled by
/// one scalar per draw so that ||H||_F^2 = N. The scalar keeps the relative
/// per-antenna power profile intact.
struct ChannelSpec {
  ChannelModel model = ChannelModel::wssus;
  std::optional<double> sigma_h2;  ///< WSSUS entry variance; default 1/M
  ElaaParams elaa;
  double carrier_frequency = 3.5e9;
  std::optional<double> antenna_spacing;  ///< default half wavelength
  double perpendicular_distance = 15.0;
  std::vector<double> user_positions;     ///< pinned positions; empty = uniform per trial
  bool normalize = true;
};

struct SweepSpec {
  std::size_t M = 256;
  std::vector<std::size_t> N{64};
  unsigned modulation = 16;
  std::vector<double> esno_db{18.0};
  ChannelSpec channel;
  std::vector<DetectorConfig> algorithms;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  std::size_t max_iterations = 10;
  bool awgn_reference = false;  ///< add an "awgn" single-stream reference row
  unsigned threads = 0;         ///< 0 = hardware concurrency

  /// Throws invalid-argument naming the offending field.
  void validate() const;
};

struct SerRecord {
  std::string algorithm;
  ChannelModel channel = ChannelModel::wssus;
  std::size_t M = 0;
  std::size_t N = 0;
  unsigned modulation = 0;
  double esno_db = 0.0;
  std::size_t iteration = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t symbols_total = 0;
  double ser = 0.0;
  double wall_time = 0.0;
  bool low_confidence = false;  ///< fewer than kMinReliableErrors errors
};

inline constexpr std::uint64_t kMinReliableErrors = 100;

struct TrialFailure {
  std::string algorithm;
  std::size_t N = 0;
  double esno_db = 0.0;
  std::size_t trial = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SerRecord> records;
  std::vector<TrialFailure> failures;
};

/// One grid point of a sweep.
struct SweepPoint {
  std::size_t M = 0;
  std::size_t N = 0;
  unsigned modulation = 16;
  double esno_db = 0.0;
  ChannelSpec channel;
  std::vector<DetectorConfig> algorithms;
  std::size_t max_iterations = 1;
  bool awgn_reference = false;
};

/// Symbol errors of one Monte Carlo draw. `errors[a][t]` counts wrong
/// decisions of algorithm a after iteration t + 1; methods with shorter traces
/// repeat their last decision. If `awgn_reference` is set the last row is the
/// single-stream AWGN reference.
struct TrialOutcome {
  std::vector<std::vector<std::uint64_t>> errors;
  std::vector<double> seconds;
  std::vector<std::optional<std::string>> failure;
};

/// Seed of trial `trial` under `master`. Independent of the grid point, so
/// every point reuses the same draws (paired comparison across the grid).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept;

/// Draws H, x, v from `seed` and runs every algorithm on the same draw.
/// Detector errors are caught per algorithm and reported in `failure`; the
/// affected algorithm is charged N errors at every iteration.
TrialOutcome run_trial(const SweepPoint& point, std::uint64_t seed);

/// The channel draw used by run_trial, exposed for tests and tools.
ComplexMatrix draw_channel(const ChannelSpec& spec, std::size_t M, std::size_t N,
                           std::uint64_t seed);

/// One record per (algorithm, iteration). Needs scalar N and Es/No.
SweepResult ser_vs_iteration(const SweepSpec& spec);
/// One record per (algorithm, N) at the final iteration.
SweepResult ser_vs_load(const SweepSpec& spec);
/// One record per (algorithm, Es/No) at the final iteration.
SweepResult ser_vs_esno(const SweepSpec& spec);

/// Monte Carlo SER of Gamma(x + v) over `trials` symbols.
double awgn_bound(unsigned modulation, double esno_db, std::size_t trials, std::uint64_t seed);

/// Closed-form square-QAM SER, 1 - (1 - p)^2 with
/// p = 2 (1 - 1/sqrt(K)) Q(sqrt(3 Es/No / (K - 1))).
double awgn_ser_closed_form(unsigned modulation, double esno_db);

}  // namespace anpid
