#include "anpid_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "anpid/error.hpp"

namespace anpid::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ValidationError(field + ": " + why);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void reject_unknown(const json& object, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json* find(const json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(field, "must be finite");
  return d;
}

std::size_t as_count(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) fail(field, "must be non-negative");
  fail(field, "expected an integer");
}

std::uint64_t as_u64(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  fail(field, "expected a non-negative integer");
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

/// Accepts either a scalar or an array of scalars.
template <typename T, typename Convert>
std::vector<T> as_list(const json& v, const std::string& field, Convert convert) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) fail(field, "needs at least one value");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(convert(v[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(convert(v, field));
  }
  return out;
}

DetectorConfig parse_algorithm_entry(const json& v, const std::string& field,
                                     std::size_t default_iterations) {
  DetectorConfig cfg;
  cfg.iterations = default_iterations;
  std::string name;
  if (v.is_string()) {
    name = v.get<std::string>();
  } else if (v.is_object()) {
    reject_unknown(v, field, {"name", "iterations", "stage_a_iterations", "damping", "rho"});
    const json* n = find(v, "name");
    if (n == nullptr) fail(field + ".name", "missing");
    name = as_string(*n, field + ".name");
    if (const json* it = find(v, "iterations")) cfg.iterations = as_count(*it, field + ".iterations");
    if (const json* it = find(v, "stage_a_iterations")) {
      cfg.stage_a_iterations = as_count(*it, field + ".stage_a_iterations");
    }
    if (const json* it = find(v, "damping")) {
      const std::string mode = as_string(*it, field + ".damping");
      const auto parsed = parse_damping_mode(mode);
      if (!parsed) fail(field + ".damping", "unknown damping mode '" + mode + "'");
      cfg.damping = *parsed;
    }
    if (const json* it = find(v, "rho")) cfg.rho = as_double(*it, field + ".rho");
  } else {
    fail(field, "expected an algorithm name or object");
  }
  const auto algorithm = parse_algorithm(name);
  if (!algorithm) throw ValidationError("unknown algorithm '" + name + "' in " + field);
  cfg.algorithm = *algorithm;
  if (!is_iterative(cfg.algorithm)) cfg.iterations = 1;
  try {
    cfg.validate();
  } catch (const Error& e) {
    fail(field, e.what());
  }
  return cfg;
}

void parse_channel(const json& v, ChannelSpec& ch) {
  if (!v.is_object()) fail("channel", "expected an object");
  reject_unknown(v, "channel",
                 {"model", "sigma_h2", "alpha", "beta", "sigma_s_db", "shadow_corr_length",
                  "carrier_frequency", "antenna_spacing", "perpendicular_distance",
                  "user_positions", "normalize"});
  if (const json* it = find(v, "model")) {
    const std::string name = as_string(*it, "channel.model");
    const auto model = parse_channel_model(name);
    if (!model) fail("channel.model", "unknown channel model '" + name + "'");
    ch.model = *model;
  }
  if (const json* it = find(v, "sigma_h2")) ch.sigma_h2 = as_double(*it, "channel.sigma_h2");
  if (const json* it = find(v, "alpha")) ch.elaa.alpha = as_double(*it, "channel.alpha");
  if (const json* it = find(v, "beta")) ch.elaa.beta = as_double(*it, "channel.beta");
  if (const json* it = find(v, "sigma_s_db")) ch.elaa.sigma_s_db = as_double(*it, "channel.sigma_s_db");
  if (const json* it = find(v, "shadow_corr_length")) {
    ch.elaa.shadow_corr_length = as_double(*it, "channel.shadow_corr_length");
  }
  if (const json* it = find(v, "carrier_frequency")) {
    ch.carrier_frequency = as_double(*it, "channel.carrier_frequency");
    if (!(ch.carrier_frequency > 0.0)) fail("channel.carrier_frequency", "must be > 0");
  }
  if (const json* it = find(v, "antenna_spacing")) {
    ch.antenna_spacing = as_double(*it, "channel.antenna_spacing");
    if (!(*ch.antenna_spacing > 0.0)) fail("channel.antenna_spacing", "must be > 0");
  }
  if (const json* it = find(v, "perpendicular_distance")) {
    ch.perpendicular_distance = as_double(*it, "channel.perpendicular_distance");
    if (!(ch.perpendicular_distance > 0.0)) fail("channel.perpendicular_distance", "must be > 0");
  }
  if (const json* it = find(v, "user_positions")) {
    if (!it->is_array()) fail("channel.user_positions", "expected an array");
    ch.user_positions.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      ch.user_positions.push_back(
          as_double((*it)[i], "channel.user_positions[" + std::to_string(i) + "]"));
    }
  }
  if (const json* it = find(v, "normalize")) ch.normalize = as_bool(*it, "channel.normalize");
}

void parse_sweep(const json& v, SweepSpec& s, bool& algorithms_given) {
  if (!v.is_object()) fail("sweep", "expected an object");
  reject_unknown(v, "sweep",
                 {"M", "N", "modulation", "esno_db", "channel", "algorithms", "trials", "seed",
                  "max_iterations", "awgn_reference", "threads"});
  if (const json* it = find(v, "M")) s.M = as_count(*it, "M");
  if (const json* it = find(v, "N")) {
    s.N = as_list<std::size_t>(*it, "N", [](const json& e, const std::string& f) { return as_count(e, f); });
  }
  if (const json* it = find(v, "modulation")) {
    const std::size_t k = as_count(*it, "modulation");
    if (k != 4 && k != 16 && k != 64) fail("modulation", "must be 4, 16 or 64");
    s.modulation = static_cast<unsigned>(k);
  }
  if (const json* it = find(v, "esno_db")) {
    s.esno_db = as_list<double>(*it, "esno_db", [](const json& e, const std::string& f) { return as_double(e, f); });
  }
  if (const json* it = find(v, "trials")) s.trials = as_count(*it, "trials");
  if (const json* it = find(v, "seed")) s.master_seed = as_u64(*it, "seed");
  if (const json* it = find(v, "max_iterations")) s.max_iterations = as_count(*it, "max_iterations");
  if (const json* it = find(v, "awgn_reference")) s.awgn_reference = as_bool(*it, "awgn_reference");
  if (const json* it = find(v, "threads")) {
    const std::size_t t = as_count(*it, "threads");
    if (t > 1024) fail("threads", "must be <= 1024");
    s.threads = static_cast<unsigned>(t);
  }
  if (const json* it = find(v, "channel")) parse_channel(*it, s.channel);
  if (const json* it = find(v, "algorithms")) {
    if (!it->is_array()) fail("algorithms", "expected an array");
    algorithms_given = true;
    s.algorithms.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      s.algorithms.push_back(parse_algorithm_entry((*it)[i], "algorithms[" + std::to_string(i) + "]",
                                                   s.max_iterations));
    }
  }
}

std::vector<DetectorConfig> default_algorithms(std::size_t T) {
  std::vector<DetectorConfig> out;
  for (const Algorithm a : {Algorithm::lmmse, Algorithm::mfb, Algorithm::jacobi, Algorithm::gs,
                            Algorithm::jacobi_dd, Algorithm::gs_dd, Algorithm::ngs_dd,
                            Algorithm::anpid_gs, Algorithm::anpid_ssor}) {
    DetectorConfig cfg;
    cfg.algorithm = a;
    cfg.iterations = is_iterative(a) ? T : 1;
    cfg.stage_a_iterations = std::min<std::size_t>(3, cfg.iterations);
    out.push_back(cfg);
  }
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::ser_vs_iteration: return "ser_vs_iteration";
    case Experiment::ser_vs_load: return "ser_vs_load";
    case Experiment::ser_vs_esno: return "ser_vs_esno";
    case Experiment::bounds_only: return "bounds_only";
  }
  return "unknown";
}

std::string_view to_string(Profile p) noexcept { return p == Profile::fast ? "fast" : "full"; }

ParseError::ParseError(std::size_t line, const std::string& detail)
    : std::runtime_error("parse-error: line " + std::to_string(line) + ": " + detail), line_(line) {}

ValidationError::ValidationError(const std::string& detail)
    : std::runtime_error("validation-error: " + detail) {}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "top level must be an object");

  RunConfig config;
  reject_unknown(doc, "", {"experiment", "sweep", "output", "profile"});
  if (const json* it = find(doc, "experiment")) {
    const std::string name = as_string(*it, "experiment");
    bool matched = false;
    for (const Experiment e : {Experiment::ser_vs_iteration, Experiment::ser_vs_load,
                               Experiment::ser_vs_esno, Experiment::bounds_only}) {
      if (name == to_string(e)) {
        config.experiment = e;
        matched = true;
      }
    }
    if (!matched) fail("experiment", "unknown experiment '" + name + "'");
  }
  if (const json* it = find(doc, "output")) {
    const std::string out = as_string(*it, "output");
    if (out.empty()) fail("output", "must not be empty");
    config.output_path = out;
  }
  if (const json* it = find(doc, "profile")) {
    const std::string name = as_string(*it, "profile");
    if (name == "fast") {
      config.profile = Profile::fast;
    } else if (name != "full") {
      fail("profile", "expected 'full' or 'fast'");
    }
  }

  bool algorithms_given = false;
  if (const json* it = find(doc, "sweep")) parse_sweep(*it, config.sweep, algorithms_given);

  if (config.experiment == Experiment::bounds_only) {
    if (algorithms_given) fail("algorithms", "not used by bounds_only");
    DetectorConfig mfb;
    mfb.algorithm = Algorithm::mfb;
    mfb.iterations = 1;
    config.sweep.algorithms = {mfb};
    config.sweep.awgn_reference = true;
  } else if (!algorithms_given) {
    config.sweep.algorithms = default_algorithms(config.sweep.max_iterations);
  }
  validate(config);
  return config;
}

void validate(const RunConfig& config) {
  const SweepSpec& s = config.sweep;
  for (const std::size_t n : s.N) {
    if (n > s.M) throw ValidationError("N exceeds M");
  }
  for (const auto& a : s.algorithms) {
    if (a.iterations > s.max_iterations) {
      fail("algorithms", std::string(a.name()) + " runs more iterations than max_iterations");
    }
  }
  switch (config.experiment) {
    case Experiment::ser_vs_iteration:
      if (s.N.size() != 1) fail("N", "ser_vs_iteration needs a single N");
      if (s.esno_db.size() != 1) fail("esno_db", "ser_vs_iteration needs a single esno_db");
      break;
    case Experiment::ser_vs_load:
      if (s.esno_db.size() != 1) fail("esno_db", "ser_vs_load needs a single esno_db");
      if (!std::is_sorted(s.N.begin(), s.N.end())) fail("N", "must be ascending");
      break;
    case Experiment::ser_vs_esno:
    case Experiment::bounds_only:
      if (s.N.size() != 1) fail("N", "this experiment needs a single N");
      if (!std::is_sorted(s.esno_db.begin(), s.esno_db.end())) fail("esno_db", "must be ascending");
      break;
  }
  try {
    s.validate();
  } catch (const Error& e) {
    // Library messages read "invalid-argument: field: why".
    std::string detail = e.what();
    const std::string tag = std::string(anpid::to_string(e.code())) + ": ";
    if (detail.rfind(tag, 0) == 0) detail.erase(0, tag.size());
    throw ValidationError(detail);
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_fast_profile(RunConfig& config) {
  config.profile = Profile::fast;
  SweepSpec& s = config.sweep;
  s.trials = std::min(s.trials, kFastTrials);
  constexpr std::size_t fast_m = 64;
  if (s.M <= fast_m) return;
  const double scale = static_cast<double>(fast_m) / static_cast<double>(s.M);
  for (std::size_t& n : s.N) {
    n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * scale)));
  }
  s.N.erase(std::unique(s.N.begin(), s.N.end()), s.N.end());
  s.M = fast_m;
}

}  // namespace anpid::cli
