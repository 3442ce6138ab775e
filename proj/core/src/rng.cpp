#include "anpid/rng.hpp"

#include <cmath>

namespace anpid {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

Complex complex_normal(Rng& rng, double variance) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double s = std::sqrt(variance / 2.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return {s * re, s * im};
}

}  // namespace anpid
