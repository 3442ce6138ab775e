#include "anpid/channel.hpp"

#include <cmath>
#include <string>

#include "anpid/error.hpp"

namespace anpid {

std::string_view to_string(ChannelModel model) noexcept {
  return model == ChannelModel::wssus ? "wssus" : "elaa";
}

std::optional<ChannelModel> parse_channel_model(std::string_view name) noexcept {
  if (name == "wssus") return ChannelModel::wssus;
  if (name == "elaa") return ChannelModel::elaa;
  return std::nullopt;
}

double ElaaGeometry::antenna_position(std::size_t m) const noexcept {
  return (static_cast<double>(m) - (static_cast<double>(service_antenna_count) - 1.0) / 2.0) *
         antenna_spacing;
}

double ElaaGeometry::distance(std::size_t m, std::size_t n) const noexcept {
  return std::hypot(perpendicular_distance, user_positions[n] - antenna_position(m));
}

double ElaaGeometry::half_aperture() const noexcept {
  return (static_cast<double>(service_antenna_count) - 1.0) * antenna_spacing / 2.0;
}

void ElaaGeometry::validate() const {
  if (service_antenna_count == 0) throw Error(ErrorCode::invalid_geometry, "no service antennas");
  if (user_positions.empty()) throw Error(ErrorCode::invalid_geometry, "no users");
  if (!(antenna_spacing > 0.0)) throw Error(ErrorCode::invalid_geometry, "antenna_spacing <= 0");
  if (!(perpendicular_distance >= 0.0)) {
    throw Error(ErrorCode::invalid_geometry, "perpendicular_distance < 0");
  }
  if (!(carrier_frequency > 0.0)) throw Error(ErrorCode::invalid_geometry, "carrier_frequency <= 0");
  for (std::size_t n = 0; n < user_positions.size(); ++n) {
    if (!std::isfinite(user_positions[n])) {
      throw Error(ErrorCode::invalid_geometry, "non-finite user position");
    }
    for (std::size_t m = 0; m < service_antenna_count; ++m) {
      if (distance(m, n) == 0.0) {
        throw Error(ErrorCode::degenerate_geometry,
                    "user " + std::to_string(n) + " coincides with antenna " + std::to_string(m));
      }
    }
  }
}

ElaaGeometry default_geometry(std::size_t service_antennas, std::vector<double> user_positions,
                              double carrier_frequency) {
  ElaaGeometry g;
  g.carrier_frequency = carrier_frequency;
  g.antenna_spacing = kSpeedOfLight / carrier_frequency / 2.0;
  g.service_antenna_count = service_antennas;
  g.user_positions = std::move(user_positions);
  return g;
}

void ElaaParams::validate() const {
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be > 0");
  if (!(beta > 0.0)) throw Error(ErrorCode::invalid_argument, "beta must be > 0");
  if (!(sigma_s_db >= 0.0)) throw Error(ErrorCode::invalid_argument, "sigma_s must be >= 0");
  if (!(shadow_corr_length >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "shadow_corr_length must be >= 0");
  }
}

ChannelRealization wssus_channel(std::size_t M, std::size_t N, double sigma_h,
                                 std::uint64_t seed) {
  if (M == 0 || N == 0) throw Error(ErrorCode::shape, "channel needs M, N >= 1");
  if (!(sigma_h > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma_h must be > 0");
  Rng rng(seed);
  ChannelRealization out{ComplexMatrix(M, N), ChannelModel::wssus, seed, std::nullopt};
  const double variance = sigma_h * sigma_h;
  for (auto& h : out.H.data()) h = complex_normal(rng, variance);
  return out;
}

std::vector<double> elaa_path_gain(const ElaaGeometry& geometry, const ElaaParams& params) {
  geometry.validate();
  params.validate();
  const std::size_t M = geometry.service_antenna_count;
  const std::size_t N = geometry.user_positions.size();
  std::vector<double> gain(M * N);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      gain[n * M + m] = params.alpha / std::pow(geometry.distance(m, n), params.beta);
    }
  }
  return gain;
}

std::vector<double> elaa_shadowing(const ElaaGeometry& geometry, const ElaaParams& params,
                                   Rng& rng) {
  const std::size_t M = geometry.service_antenna_count;
  const std::size_t N = geometry.user_positions.size();
  std::vector<double> shadow(M * N, 1.0);
  if (params.sigma_s_db == 0.0) return shadow;

  // Exponential correlation on a uniform grid is exactly a first-order
  // autoregression with coefficient exp(-spacing / length).
  const double rho = params.shadow_corr_length > 0.0
                         ? std::exp(-geometry.antenna_spacing / params.shadow_corr_length)
                         : 0.0;
  const double innovation = std::sqrt(1.0 - rho * rho);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (std::size_t n = 0; n < N; ++n) {
    double chi = n01(rng);
    for (std::size_t m = 0; m < M; ++m) {
      if (m > 0) chi = rho * chi + innovation * n01(rng);
      shadow[n * M + m] = std::pow(10.0, params.sigma_s_db * chi / 20.0);
    }
  }
  return shadow;
}

ChannelRealization elaa_channel(const ElaaGeometry& geometry, const ElaaParams& params,
                                std::uint64_t seed) {
  const std::vector<double> gain = elaa_path_gain(geometry, params);
  Rng rng(seed);
  const std::vector<double> shadow = elaa_shadowing(geometry, params, rng);
  const std::size_t M = geometry.service_antenna_count;
  const std::size_t N = geometry.user_positions.size();
  ChannelRealization out{ComplexMatrix(M, N), ChannelModel::elaa, seed, geometry};
  auto data = out.H.data();
  for (std::size_t k = 0; k < M * N; ++k) data[k] = shadow[k] * gain[k] * complex_normal(rng);
  return out;
}

std::vector<double> uniform_user_positions(std::size_t N, const ElaaGeometry& geometry, Rng& rng) {
  const double half = geometry.half_aperture();
  std::uniform_real_distribution<double> pick(-half, half);
  std::vector<double> pos(N);
  for (auto& p : pos) p = pick(rng);
  return pos;
}

ComplexVector awgn(std::size_t M, double sigma_v2, std::uint64_t seed) {
  if (!(sigma_v2 >= 0.0)) throw Error(ErrorCode::invalid_argument, "sigma_v2 must be >= 0");
  ComplexVector v(M);
  if (sigma_v2 == 0.0) return v;
  Rng rng(seed);
  for (auto& e : v) e = complex_normal(rng, sigma_v2);
  return v;
}

double esno_to_sigma_v2(double esno_db) noexcept { return std::pow(10.0, -esno_db / 10.0); }

}  // namespace anpid
