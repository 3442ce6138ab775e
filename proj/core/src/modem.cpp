#include "anpid/modem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anpid/error.hpp"

namespace anpid {

namespace {

std::uint32_t gray(std::uint32_t v) noexcept { return v ^ (v >> 1); }

// Nearest level index on one axis, ties toward the lower level.
std::uint32_t axis_level(double v, double scale, unsigned side) noexcept {
  // Level k sits at (2k - (side - 1)) * scale.
  const double q = (v / scale + static_cast<double>(side - 1)) / 2.0;
  const double k = std::ceil(q - 0.5);
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(side - 1)) return side - 1;
  return static_cast<std::uint32_t>(k);
}

}  // namespace

Constellation make_constellation(unsigned order) {
  unsigned side = 0;
  switch (order) {
    case 4: side = 2; break;
    case 16: side = 4; break;
    case 64: side = 8; break;
    default:
      throw Error(ErrorCode::bad_order,
                  "unsupported QAM order " + std::to_string(order) + " (use 4, 16 or 64)");
  }
  Constellation c;
  c.order_ = order;
  c.side_ = side;
  c.bits_ = static_cast<unsigned>(std::lround(std::log2(order)));
  // Mean energy of the odd-integer grid is 2 (side^2 - 1) / 3.
  c.scale_ = 1.0 / std::sqrt(2.0 * (side * side - 1.0) / 3.0);

  const unsigned half_bits = c.bits_ / 2;
  c.points_.resize(order);
  c.labels_.resize(order);
  c.label_to_index_.resize(order);
  for (unsigned re = 0; re < side; ++re) {
    for (unsigned im = 0; im < side; ++im) {
      const unsigned k = re * side + im;
      const double level_re = 2.0 * re - (side - 1.0);
      const double level_im = 2.0 * im - (side - 1.0);
      c.points_[k] = {level_re * c.scale_, level_im * c.scale_};
      c.labels_[k] = (gray(re) << half_bits) | gray(im);
      c.label_to_index_[c.labels_[k]] = k;
    }
  }
  return c;
}

std::size_t Constellation::index_of_label(std::uint32_t label) const {
  if (label >= order_) throw Error(ErrorCode::invalid_argument, "label out of range");
  return label_to_index_[label];
}

std::uint32_t Constellation::nearest(Complex s) const {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw Error(ErrorCode::non_finite_input, "cannot slice a non-finite value");
  }
  return axis_level(s.real(), scale_, side_) * side_ + axis_level(s.imag(), scale_, side_);
}

SymbolVector slice(std::span<const Complex> s, const Constellation& c) {
  SymbolVector out{ComplexVector(s.size()), std::vector<std::uint32_t>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint32_t k = c.nearest(s[i]);
    out.indices[i] = k;
    out.symbols[i] = c.point(k);
  }
  return out;
}

SymbolVector random_symbols(std::size_t n, const Constellation& c, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "symbol count must be >= 1");
  std::uniform_int_distribution<std::uint32_t> pick(0, c.order() - 1);
  std::vector<std::uint32_t> idx(n);
  for (auto& k : idx) k = pick(rng);
  return from_indices(std::move(idx), c);
}

SymbolVector random_symbols(std::size_t n, const Constellation& c, std::uint64_t seed) {
  Rng rng(seed);
  return random_symbols(n, c, rng);
}

SymbolVector from_indices(std::vector<std::uint32_t> indices, const Constellation& c) {
  SymbolVector out{ComplexVector(indices.size()), std::move(indices)};
  for (std::size_t i = 0; i < out.indices.size(); ++i) {
    if (out.indices[i] >= c.order()) {
      throw Error(ErrorCode::invalid_argument, "symbol index out of range");
    }
    out.symbols[i] = c.point(out.indices[i]);
  }
  return out;
}

std::size_t symbol_errors(std::span<const std::uint32_t> decided,
                          std::span<const std::uint32_t> truth) {
  if (decided.size() != truth.size()) throw Error(ErrorCode::shape, "decision length mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) errors += decided[i] != truth[i] ? 1 : 0;
  return errors;
}

}  // namespace anpid
