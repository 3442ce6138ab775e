#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "anpid/linalg.hpp"
#include "anpid/rng.hpp"

namespace anpid {

inline constexpr double kSpeedOfLight = 299'792'458.0;

enum class ChannelModel { wssus, elaa };

std::string_view to_string(ChannelModel model) noexcept;
std::optional<ChannelModel> parse_channel_model(std::string_view name) noexcept;

/// Uniform linear array along one axis, users on a parallel line at
/// `perpendicular_distance`. Element m sits at (m - (M-1)/2) * spacing, so the
/// array is centred on the origin.
struct ElaaGeometry {
  double carrier_frequency = 3.5e9;
  double antenna_spacing = kSpeedOfLight / 3.5e9 / 2.0;
  double perpendicular_distance = 15.0;
  std::vector<double> user_positions;
  std::size_t service_antenna_count = 256;

  [[nodiscard]] double antenna_position(std::size_t m) const noexcept;
  [[nodiscard]] double distance(std::size_t m, std::size_t n) const noexcept;
  /// Half the span between the outermost elements.
  [[nodiscard]] double half_aperture() const noexcept;
  /// Throws invalid-geometry / degenerate-geometry.
  void validate() const;
};

/// Geometry with half-wavelength spacing for `carrier_frequency`.
ElaaGeometry default_geometry(std::size_t service_antennas, std::vector<double> user_positions,
                              double carrier_frequency = 3.5e9);

struct ElaaParams {
  double alpha = 0.020;
  double beta = 1.765;
  double sigma_s_db = 6.053;          ///< shadowing standard deviation, dB
  double shadow_corr_length = 1.0;    ///< metres; 0 means independent per antenna

  void validate() const;
};

struct ChannelRealization {
  ComplexMatrix H;
  ChannelModel model = ChannelModel::wssus;
  std::uint64_t seed = 0;
  std::optional<ElaaGeometry> geometry;
};

/// i.i.d. CN(0, sigma_h^2) entries.
ChannelRealization wssus_channel(std::size_t M, std::size_t N, double sigma_h, std::uint64_t seed);

/// Deterministic large-scale amplitude alpha / d^beta for every (m, n).
std::vector<double> elaa_path_gain(const ElaaGeometry& geometry, const ElaaParams& params);

/// Log-normal amplitude shadowing 10^(chi/20) for every (m, n), column-major.
/// chi is zero-mean Gaussian with std sigma_s_db, exponentially correlated
/// along the array for each user.
std::vector<double> elaa_shadowing(const ElaaGeometry& geometry, const ElaaParams& params, Rng& rng);

/// Spherical-wave channel: shadowing * path gain * CN(0,1) small-scale fading.
ChannelRealization elaa_channel(const ElaaGeometry& geometry, const ElaaParams& params,
                                std::uint64_t seed);

/// Draws user positions uniformly along the array aperture.
std::vector<double> uniform_user_positions(std::size_t N, const ElaaGeometry& geometry, Rng& rng);

/// i.i.d. CN(0, sigma_v2) noise.
ComplexVector awgn(std::size_t M, double sigma_v2, std::uint64_t seed);

/// Noise variance for a given Es/No in dB with unit symbol energy.
double esno_to_sigma_v2(double esno_db) noexcept;

}  // namespace anpid
