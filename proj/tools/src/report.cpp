#include "anpid_cli/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace anpid::cli {

namespace {

// Shortest text that parses back to the same double.
std::string number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_csv(std::span<const SerRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const SerRecord& r : records) {
    out += r.algorithm;
    out += ',';
    out += to_string(r.channel);
    out += ',' + std::to_string(r.M);
    out += ',' + std::to_string(r.N);
    out += ',' + std::to_string(r.modulation);
    out += ',' + number(r.esno_db);
    out += ',' + std::to_string(r.iteration);
    out += ',' + std::to_string(r.symbol_errors);
    out += ',' + std::to_string(r.symbols_total);
    out += ',' + number(r.ser);
    out += ',' + number(r.wall_time);
    out += '\n';
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".manifest.json");
  return p;
}

void emit_csv(std::span<const SerRecord> records, const std::filesystem::path& path,
              const Manifest& manifest) {
  if (records.empty()) throw std::runtime_error("no records to write to " + path.string());
  write_file(path, format_csv(records));

  nlohmann::ordered_json doc;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(manifest.config_hash));
  doc["config_hash"] = hash;
  doc["master_seed"] = manifest.master_seed;
  doc["code_version"] = manifest.code_version;
  doc["experiment"] = manifest.experiment;
  doc["profile"] = manifest.profile;
  doc["csv"] = path.filename().string();
  doc["records"] = records.size();
  auto low = nlohmann::ordered_json::array();
  for (const SerRecord& r : records) {
    if (!r.low_confidence) continue;
    low.push_back({{"algorithm", r.algorithm}, {"N", r.N}, {"esno_db", r.esno_db},
                   {"iteration", r.iteration}, {"symbol_errors", r.symbol_errors}});
  }
  doc["low_confidence"] = std::move(low);
  auto failures = nlohmann::ordered_json::array();
  for (const TrialFailure& f : manifest.failures) {
    failures.push_back({{"algorithm", f.algorithm}, {"N", f.N}, {"esno_db", f.esno_db},
                        {"trial", f.trial}, {"message", f.message}});
  }
  doc["failures"] = std::move(failures);
  write_file(manifest_path(path), doc.dump(2) + "\n");
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("unexpected CSV header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected 11 fields");
    }
    try {
      CsvRow r;
      r.algorithm = f[0];
      r.channel = f[1];
      r.M = std::stoull(f[2]);
      r.N = std::stoull(f[3]);
      r.modulation = static_cast<unsigned>(std::stoul(f[4]));
      r.esno_db = std::stod(f[5]);
      r.iteration = std::stoull(f[6]);
      r.symbol_errors = std::stoull(f[7]);
      r.symbols_total = std::stoull(f[8]);
      r.ser = std::stod(f[9]);
      r.wall_time = std::stod(f[10]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + ": bad number");
    }
  }
  return rows;
}

std::string strip_wall_time(std::string_view csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(start, end - start);
    const std::size_t comma = line.rfind(',');
    out += comma == std::string_view::npos ? line : line.substr(0, comma);
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace anpid::cli
