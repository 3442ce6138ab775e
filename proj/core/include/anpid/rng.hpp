#pragma once

#include <cstdint>
#include <random>

#include "anpid/linalg.hpp"

namespace anpid {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based child seed: independent streams for (trial, purpose) pairs
/// under one master seed, with no dependence on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream) noexcept;

/// Draws one CN(0, variance) sample: real and imaginary parts N(0, variance/2).
Complex complex_normal(Rng& rng, double variance = 1.0);

/// Named sub-streams used by the simulation harness.
namespace stream {
inline constexpr std::uint64_t channel = 1;
inline constexpr std::uint64_t symbols = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t placement = 4;
inline constexpr std::uint64_t awgn_reference = 5;
}  // namespace stream

}  // namespace anpid
