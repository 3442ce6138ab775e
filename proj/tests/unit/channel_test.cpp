#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "anpid/channel.hpp"
#include "anpid/error.hpp"
#include "oracles.hpp"

namespace anpid {
namespace {

TEST(Wssus, EntryVarianceScalar) {
  const double sigma_h = 1.3;
  double acc = 0.0;
  const int draws = 50000;
  for (int s = 0; s < draws; ++s) {
    acc += std::norm(wssus_channel(1, 1, sigma_h, static_cast<std::uint64_t>(s)).H(0, 0));
  }
  EXPECT_NEAR(acc / draws, sigma_h * sigma_h, 0.02 * sigma_h * sigma_h);
}

TEST(Wssus, SameSeedSameChannel) {
  const auto a = wssus_channel(16, 4, 1.0, 42);
  const auto b = wssus_channel(16, 4, 1.0, 42);
  EXPECT_EQ(oracle::max_abs_diff(a.H, b.H), 0.0);
  EXPECT_EQ(a.model, ChannelModel::wssus);
  EXPECT_EQ(a.seed, 42u);
  const auto c = wssus_channel(16, 4, 1.0, 43);
  EXPECT_GT(oracle::max_abs_diff(a.H, c.H), 0.0);
}

TEST(Wssus, ColumnNormConcentration) {
  const auto H = wssus_channel(256, 64, 1.0, 7).H;
  double mean = 0.0;
  for (std::size_t n = 0; n < 64; ++n) mean += norm_squared(H.column(n));
  mean /= 64.0;
  EXPECT_NEAR(mean, 256.0, 0.03 * 256.0);
}

TEST(Wssus, GaussianKurtosis) {
  // Real parts of CN entries are Gaussian: fourth standardized moment 3.
  const auto H = wssus_channel(1000, 1000, 1.0, 3).H;
  double m2 = 0.0;
  double m4 = 0.0;
  for (const Complex& h : H.data()) {
    const double r2 = h.real() * h.real();
    m2 += r2;
    m4 += r2 * r2;
  }
  const double n = static_cast<double>(H.data().size());
  const double kurtosis = (m4 / n) / ((m2 / n) * (m2 / n));
  EXPECT_GE(kurtosis, 2.8);
  EXPECT_LE(kurtosis, 3.2);
}

ElaaParams no_shadowing() {
  ElaaParams p;
  p.sigma_s_db = 0.0;
  return p;
}

TEST(Elaa, BroadsideSingleAntennaPathLoss) {
  auto g = default_geometry(1, {0.0});
  const auto gain = elaa_path_gain(g, no_shadowing());
  ASSERT_EQ(gain.size(), 1u);
  EXPECT_DOUBLE_EQ(gain[0], 0.020 / std::pow(15.0, 1.765));

  // Empirically, sqrt(E|h|^2) equals the same value.
  double acc = 0.0;
  const int draws = 40000;
  for (int s = 0; s < draws; ++s) {
    acc += std::norm(elaa_channel(g, no_shadowing(), static_cast<std::uint64_t>(s)).H(0, 0));
  }
  EXPECT_NEAR(std::sqrt(acc / draws), gain[0], 0.01 * gain[0]);
}

TEST(Elaa, VarianceProfileFollowsGeometry) {
  const std::size_t M = 32;
  auto g = default_geometry(M, {-0.3, 0.5});
  const auto params = no_shadowing();
  const auto gain = elaa_path_gain(g, params);
  const double lambda_half = kSpeedOfLight / 3.5e9 / 2.0;
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      const double p = (static_cast<double>(m) - (M - 1) / 2.0) * lambda_half;
      const double d = std::hypot(15.0, g.user_positions[n] - p);
      EXPECT_NEAR(gain[n * M + m], 0.020 / std::pow(d, 1.765), 1e-15);
    }
  }
  // Monte Carlo over seeds: per-entry E|h|^2 tracks gain^2, and the
  // magnitude spread is the Rayleigh law scaled by the gain.
  std::vector<double> power(M * 2, 0.0);
  std::vector<double> magnitude(M * 2, 0.0);
  const int draws = 4000;
  for (int s = 0; s < draws; ++s) {
    const auto H = elaa_channel(g, params, static_cast<std::uint64_t>(s)).H;
    for (std::size_t n = 0; n < 2; ++n) {
      for (std::size_t m = 0; m < M; ++m) {
        power[n * M + m] += std::norm(H(m, n));
        magnitude[n * M + m] += std::abs(H(m, n));
      }
    }
  }
  for (std::size_t k = 0; k < M * 2; ++k) {
    const double g2 = gain[k] * gain[k];
    EXPECT_NEAR(power[k] / draws, g2, 0.1 * g2);
    const double mean_mag = magnitude[k] / draws;
    // E|g| = sqrt(pi)/2 for g ~ CN(0,1).
    EXPECT_NEAR(mean_mag, gain[k] * std::sqrt(M_PI) / 2.0, 0.05 * gain[k]);
  }
}

/// Index of the strongest antenna for user n after a 17-element moving
/// average of |h|^2, which suppresses small-scale fading.
long smoothed_argmax(const ComplexMatrix& H, std::size_t n) {
  const std::size_t M = H.rows();
  std::vector<double> p(M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t k = (m >= 8 ? m - 8 : 0); k < std::min(M, m + 9); ++k) p[m] += std::norm(H(k, n));
  }
  return std::max_element(p.begin(), p.end()) - p.begin();
}

TEST(Elaa, OppositeEndUsersPeakAtDifferentAntennas) {
  const std::size_t M = 256;
  auto g = default_geometry(M, {});
  g.user_positions = {-g.half_aperture(), g.half_aperture()};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto H = elaa_channel(g, ElaaParams{}, seed).H;
    EXPECT_NE(smoothed_argmax(H, 0), smoothed_argmax(H, 1)) << seed;
  }
  // Without shadowing the peak sits on the user's own end of the array.
  const auto H = elaa_channel(g, no_shadowing(), 5).H;
  EXPECT_LT(smoothed_argmax(H, 0), static_cast<long>(M / 2));
  EXPECT_GT(smoothed_argmax(H, 1), static_cast<long>(M / 2));
}

TEST(Elaa, ColumnNormsVaryAndGrowWithAperture) {
  auto ratio = [](std::size_t M) {
    auto g = default_geometry(M, {});
    const double h = g.half_aperture();
    for (int i = 0; i < 8; ++i) g.user_positions.push_back(-h + 2.0 * h * i / 7.0);
    const auto gain = elaa_path_gain(g, no_shadowing());
    double lo = INFINITY, hi = 0.0;
    for (std::size_t n = 0; n < 8; ++n) {
      double s = 0.0;
      for (std::size_t m = 0; m < M; ++m) s += gain[n * M + m] * gain[n * M + m];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return hi / lo;
  };
  const double r256 = ratio(256);
  EXPECT_GT(r256, 1.0);
  EXPECT_GT(ratio(1024), r256);

  auto g = default_geometry(256, {});
  const double h = g.half_aperture();
  for (int i = 0; i < 8; ++i) g.user_positions.push_back(-h + 2.0 * h * i / 7.0);
  const auto H = elaa_channel(g, ElaaParams{}, 11).H;
  double lo = INFINITY, hi = 0.0;
  for (std::size_t n = 0; n < 8; ++n) {
    lo = std::min(lo, norm_squared(H.column(n)));
    hi = std::max(hi, norm_squared(H.column(n)));
  }
  EXPECT_GT(hi / lo, 1.0);
}

TEST(Elaa, Deterministic) {
  auto g = default_geometry(64, {0.1, -0.2, 0.4});
  const auto a = elaa_channel(g, ElaaParams{}, 9);
  const auto b = elaa_channel(g, ElaaParams{}, 9);
  EXPECT_EQ(oracle::max_abs_diff(a.H, b.H), 0.0);
  ASSERT_TRUE(a.geometry.has_value());
  EXPECT_EQ(a.model, ChannelModel::elaa);
}

TEST(Elaa, ShadowingStatistics) {
  // chi in dB has the configured standard deviation; correlation decays with
  // distance along the array.
  auto g = default_geometry(256, {0.0});
  ElaaParams p;
  Rng rng(4);
  double sum = 0.0, sum2 = 0.0, lag1 = 0.0, lag_far = 0.0;
  int count = 0, pairs = 0;
  int far_pairs = 0;
  for (int rep = 0; rep < 3000; ++rep) {
    const auto s = elaa_shadowing(g, p, rng);
    std::vector<double> chi(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) chi[i] = 20.0 * std::log10(s[i]);
    for (std::size_t i = 0; i < chi.size(); ++i) {
      sum += chi[i];
      sum2 += chi[i] * chi[i];
      ++count;
      if (i + 1 < chi.size()) {
        lag1 += chi[i] * chi[i + 1];
        ++pairs;
      }
      if (i + 200 < chi.size()) {
        lag_far += chi[i] * chi[i + 200];
        ++far_pairs;
      }
    }
  }
  const double var = sum2 / count - (sum / count) * (sum / count);
  EXPECT_NEAR(std::sqrt(var), 6.053, 0.15);
  const double rho1 = lag1 / pairs / var;
  const double rho_far = lag_far / far_pairs / var;
  const double expected1 = std::exp(-g.antenna_spacing / p.shadow_corr_length);
  const double expected_far = std::exp(-200.0 * g.antenna_spacing / p.shadow_corr_length);
  EXPECT_NEAR(rho1, expected1, 0.05);
  EXPECT_NEAR(rho_far, expected_far, 0.08);
}

TEST(Elaa, IndependentShadowingWhenCorrelationLengthZero) {
  auto g = default_geometry(128, {0.0});
  ElaaParams p;
  p.shadow_corr_length = 0.0;
  Rng rng(8);
  double lag1 = 0.0, var = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = elaa_shadowing(g, p, rng);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double a = 20.0 * std::log10(s[i]);
      const double b = 20.0 * std::log10(s[i + 1]);
      lag1 += a * b;
      var += a * a;
    }
  }
  EXPECT_LT(std::abs(lag1 / var), 0.05);
}

TEST(Elaa, GeometryErrors) {
  auto g = default_geometry(4, {0.0});
  g.perpendicular_distance = 0.0;
  g.user_positions = {g.antenna_position(1)};
  try {
    (void)elaa_channel(g, ElaaParams{}, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_geometry);
  }
  auto bad = default_geometry(4, {0.0});
  bad.antenna_spacing = -1.0;
  try {
    bad.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_geometry);
  }
  ElaaParams p;
  p.alpha = 0.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Awgn, ZeroVariance) {
  const auto v = awgn(10, 0.0, 1);
  EXPECT_TRUE(is_zero(v));
}

TEST(Awgn, EmpiricalVariance) {
  const auto v = awgn(100000, 0.25, 2);
  EXPECT_NEAR(norm_squared(v) / 1e5, 0.25, 0.02 * 0.25);
  EXPECT_EQ(v, awgn(100000, 0.25, 2));
}

TEST(EsNo, Conversion) {
  EXPECT_DOUBLE_EQ(esno_to_sigma_v2(0.0), 1.0);
  EXPECT_NEAR(esno_to_sigma_v2(18.0), 0.01585, 1e-5);
  EXPECT_NEAR(esno_to_sigma_v2(31.0), 7.943e-4, 1e-7);
}

TEST(ChannelModel, Names) {
  EXPECT_EQ(to_string(ChannelModel::elaa), "elaa");
  EXPECT_EQ(parse_channel_model("wssus"), ChannelModel::wssus);
  EXPECT_FALSE(parse_channel_model("rician").has_value());
}

}  // namespace
}  // namespace anpid
