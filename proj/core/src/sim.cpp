#include "anpid/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>
#include <tuple>

#include "anpid/error.hpp"
#include "anpid/rng.hpp"

namespace anpid {

namespace {

void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::invalid_argument, field + ": " + why);
}

struct PointTotals {
  std::vector<std::vector<std::uint64_t>> errors;
  std::vector<double> seconds;
  std::vector<TrialFailure> failures;
};

std::size_t row_count(const SweepPoint& p) {
  return p.algorithms.size() + (p.awgn_reference ? 1 : 0);
}

PointTotals simulate_point(const SweepPoint& point, const SweepSpec& spec) {
  const std::size_t rows = row_count(point);
  PointTotals totals{std::vector<std::vector<std::uint64_t>>(
                         rows, std::vector<std::uint64_t>(point.max_iterations, 0)),
                     std::vector<double>(rows, 0.0), {}};

  unsigned workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec.trials)));

  std::atomic<std::size_t> next{0};
  std::mutex merge;
  const auto work = [&] {
    PointTotals local{std::vector<std::vector<std::uint64_t>>(
                          rows, std::vector<std::uint64_t>(point.max_iterations, 0)),
                      std::vector<double>(rows, 0.0), {}};
    for (std::size_t trial = next++; trial < spec.trials; trial = next++) {
      const TrialOutcome out = run_trial(point, trial_seed(spec.master_seed, trial));
      for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t t = 0; t < point.max_iterations; ++t) local.errors[a][t] += out.errors[a][t];
        local.seconds[a] += out.seconds[a];
        if (a < point.algorithms.size() && out.failure[a]) {
          local.failures.push_back({std::string(point.algorithms[a].name()), point.N,
                                    point.esno_db, trial, *out.failure[a]});
        }
      }
    }
    const std::lock_guard lock(merge);
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t t = 0; t < point.max_iterations; ++t) totals.errors[a][t] += local.errors[a][t];
      totals.seconds[a] += local.seconds[a];
    }
    totals.failures.insert(totals.failures.end(), local.failures.begin(), local.failures.end());
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::sort(totals.failures.begin(), totals.failures.end(),
            [](const TrialFailure& a, const TrialFailure& b) {
              return std::tie(a.trial, a.algorithm) < std::tie(b.trial, b.algorithm);
            });
  return totals;
}

SerRecord make_record(const SweepSpec& spec, const SweepPoint& point, const PointTotals& totals,
                      std::size_t row, std::size_t iteration) {
  SerRecord r;
  r.algorithm = row < point.algorithms.size() ? std::string(point.algorithms[row].name()) : "awgn";
  r.channel = spec.channel.model;
  r.M = point.M;
  r.N = point.N;
  r.modulation = point.modulation;
  r.esno_db = point.esno_db;
  r.iteration = iteration;
  r.symbol_errors = totals.errors[row][iteration - 1];
  r.symbols_total = static_cast<std::uint64_t>(spec.trials) * point.N;
  r.ser = static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols_total);
  r.wall_time = totals.seconds[row];
  r.low_confidence = r.symbol_errors < kMinReliableErrors;
  return r;
}

SweepPoint point_of(const SweepSpec& spec, std::size_t N, double esno_db) {
  SweepPoint p;
  p.M = spec.M;
  p.N = N;
  p.modulation = spec.modulation;
  p.esno_db = esno_db;
  p.channel = spec.channel;
  p.algorithms = spec.algorithms;
  p.max_iterations = spec.max_iterations;
  p.awgn_reference = spec.awgn_reference;
  return p;
}

// Runs every (N, esno) grid point and emits records at the final iteration,
// ordered by algorithm then grid position.
SweepResult final_iteration_sweep(const SweepSpec& spec) {
  std::vector<SweepPoint> points;
  for (const std::size_t n : spec.N) {
    for (const double e : spec.esno_db) points.push_back(point_of(spec, n, e));
  }
  std::vector<PointTotals> totals;
  totals.reserve(points.size());
  SweepResult result;
  for (const auto& p : points) {
    totals.push_back(simulate_point(p, spec));
    result.failures.insert(result.failures.end(), totals.back().failures.begin(),
                           totals.back().failures.end());
  }
  const std::size_t rows = row_count(points.front());
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t k = 0; k < points.size(); ++k) {
      result.records.push_back(make_record(spec, points[k], totals[k], a, spec.max_iterations));
    }
  }
  return result;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

void SweepSpec::validate() const {
  if (M < 1) invalid("M", "must be >= 1");
  if (N.empty()) invalid("N", "needs at least one value");
  for (const std::size_t n : N) {
    if (n < 1) invalid("N", "must be >= 1");
    if (n > M) invalid("N", "N exceeds M");
  }
  if (modulation != 4 && modulation != 16 && modulation != 64) {
    invalid("modulation", "must be 4, 16 or 64");
  }
  if (esno_db.empty()) invalid("esno_db", "needs at least one value");
  for (const double e : esno_db) {
    if (!std::isfinite(e)) invalid("esno_db", "must be finite");
  }
  if (trials < 1) invalid("trials", "must be >= 1");
  if (max_iterations < 1) invalid("max_iterations", "must be >= 1");
  if (algorithms.empty() && !awgn_reference) invalid("algorithms", "nothing to run");
  for (const auto& a : algorithms) a.validate();
  channel.elaa.validate();
  if (!channel.user_positions.empty()) {
    for (const std::size_t n : N) {
      if (channel.user_positions.size() != n) {
        invalid("channel.user_positions", "pinned positions must match N");
      }
    }
  }
  if (channel.sigma_h2 && !(*channel.sigma_h2 > 0.0)) invalid("channel.sigma_h2", "must be > 0");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept {
  return derive_seed(master, trial, 0);
}

ComplexMatrix draw_channel(const ChannelSpec& spec, std::size_t M, std::size_t N,
                           std::uint64_t seed) {
  const std::uint64_t channel_seed = derive_seed(seed, 0, stream::channel);
  if (spec.model == ChannelModel::wssus) {
    const double variance = spec.sigma_h2.value_or(1.0 / static_cast<double>(M));
    return wssus_channel(M, N, std::sqrt(variance), channel_seed).H;
  }

  ElaaGeometry geometry = default_geometry(M, {}, spec.carrier_frequency);
  if (spec.antenna_spacing) geometry.antenna_spacing = *spec.antenna_spacing;
  geometry.perpendicular_distance = spec.perpendicular_distance;
  if (spec.user_positions.empty()) {
    Rng placement(derive_seed(seed, 0, stream::placement));
    geometry.user_positions = uniform_user_positions(N, geometry, placement);
  } else {
    geometry.user_positions = spec.user_positions;
  }
  ComplexMatrix H = elaa_channel(geometry, spec.elaa, channel_seed).H;
  if (spec.normalize) {
    const double energy = norm_squared(H.data());
    if (energy > 0.0) {
      const double s = std::sqrt(static_cast<double>(N) / energy);
      for (auto& h : H.data()) h *= s;
    }
  }
  return H;
}

TrialOutcome run_trial(const SweepPoint& point, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const Constellation c = make_constellation(point.modulation);
  const std::size_t M = point.M;
  const std::size_t N = point.N;
  const std::size_t T = point.max_iterations;
  const double sigma_v2 = esno_to_sigma_v2(point.esno_db);

  const ComplexMatrix H = draw_channel(point.channel, M, N, seed);
  const SymbolVector x = random_symbols(N, c, derive_seed(seed, 0, stream::symbols));
  // Unit-variance draw scaled afterwards, so grid points share the same noise
  // direction and differ only in its power.
  ComplexVector v = awgn(M, 1.0, derive_seed(seed, 0, stream::noise));
  const double sigma_v = std::sqrt(sigma_v2);
  for (auto& e : v) e *= sigma_v;

  ComplexVector y = multiply(H, x.symbols.span());
  for (std::size_t m = 0; m < M; ++m) y[m] += v[m];

  const ComplexMatrix G = gram(H);
  const ComplexVector b = adjoint_multiply(H, y.span());
  const DetectionInput in{H, y.span(), G, b.span(), c, sigma_v2, x.symbols.span(), v.span()};

  const std::size_t rows = row_count(point);
  TrialOutcome out{std::vector<std::vector<std::uint64_t>>(rows, std::vector<std::uint64_t>(T, 0)),
                   std::vector<double>(rows, 0.0),
                   std::vector<std::optional<std::string>>(rows)};

  for (std::size_t a = 0; a < point.algorithms.size(); ++a) {
    DetectorConfig cfg = point.algorithms[a];
    if (is_iterative(cfg.algorithm)) cfg.iterations = std::max(cfg.iterations, T);
    const auto start = Clock::now();
    try {
      const DetectorResult r = detect(cfg, in);
      for (std::size_t t = 0; t < T; ++t) {
        const auto& rec = r.trace[std::min(t, r.trace.size() - 1)];
        out.errors[a][t] = symbol_errors(rec.decision.indices, x.indices);
      }
    } catch (const Error& e) {
      out.failure[a] = e.what();
      for (auto& count : out.errors[a]) count = N;
    }
    out.seconds[a] = std::chrono::duration<double>(Clock::now() - start).count();
  }

  if (point.awgn_reference) {
    const auto start = Clock::now();
    Rng rng(derive_seed(seed, 0, stream::awgn_reference));
    std::uint64_t errors = 0;
    for (std::size_t n = 0; n < N; ++n) {
      errors += c.nearest(x.symbols[n] + sigma_v * complex_normal(rng)) != x.indices[n] ? 1 : 0;
    }
    for (auto& count : out.errors.back()) count = errors;
    out.seconds.back() = std::chrono::duration<double>(Clock::now() - start).count();
  }
  return out;
}

SweepResult ser_vs_iteration(const SweepSpec& spec) {
  spec.validate();
  if (spec.N.size() != 1 || spec.esno_db.size() != 1) {
    invalid("sweep", "ser_vs_iteration needs a single N and a single esno_db");
  }
  const SweepPoint p = point_of(spec, spec.N.front(), spec.esno_db.front());
  const PointTotals totals = simulate_point(p, spec);
  SweepResult result;
  result.failures = totals.failures;
  for (std::size_t a = 0; a < row_count(p); ++a) {
    for (std::size_t t = 1; t <= spec.max_iterations; ++t) {
      result.records.push_back(make_record(spec, p, totals, a, t));
    }
  }
  return result;
}

SweepResult ser_vs_load(const SweepSpec& spec) {
  spec.validate();
  if (spec.esno_db.size() != 1) invalid("esno_db", "ser_vs_load needs a single esno_db");
  if (!std::is_sorted(spec.N.begin(), spec.N.end())) invalid("N", "must be ascending");
  return final_iteration_sweep(spec);
}

SweepResult ser_vs_esno(const SweepSpec& spec) {
  spec.validate();
  if (spec.N.size() != 1) invalid("N", "ser_vs_esno needs a single N");
  if (!std::is_sorted(spec.esno_db.begin(), spec.esno_db.end())) {
    invalid("esno_db", "must be ascending");
  }
  return final_iteration_sweep(spec);
}

double awgn_bound(unsigned modulation, double esno_db, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) invalid("trials", "must be >= 1");
  const Constellation c = make_constellation(modulation);
  const double sigma_v = std::sqrt(esno_to_sigma_v2(esno_db));
  Rng rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, c.order() - 1);
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint32_t k = pick(rng);
    errors += c.nearest(c.point(k) + sigma_v * complex_normal(rng)) != k ? 1 : 0;
  }
  return static_cast<double>(errors) / static_cast<double>(trials);
}

double awgn_ser_closed_form(unsigned modulation, double esno_db) {
  const double K = static_cast<double>(make_constellation(modulation).order());
  const double esno = std::pow(10.0, esno_db / 10.0);
  const double p = 2.0 * (1.0 - 1.0 / std::sqrt(K)) * q_function(std::sqrt(3.0 * esno / (K - 1.0)));
  return 1.0 - (1.0 - p) * (1.0 - p);
}

}  // namespace anpid
