#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "anpid/linalg.hpp"
#include "anpid/rng.hpp"

namespace anpid {

/// Square QAM alphabet with unit average symbol energy.
///
/// Point k sits at grid coordinates (k / side, k % side): the real-axis level
/// is the major index, both axes ascending from the most negative level.
/// Labels are per-axis reflected-binary Gray codes, real axis in the high bits.
class Constellation {
 public:
  [[nodiscard]] unsigned order() const noexcept { return order_; }
  [[nodiscard]] unsigned side() const noexcept { return side_; }
  [[nodiscard]] unsigned bits_per_symbol() const noexcept { return bits_; }
  /// Distance from a grid level to its neighbor is 2 * scale().
  [[nodiscard]] double scale() const noexcept { return scale_; }

  [[nodiscard]] std::span<const Complex> points() const noexcept { return points_; }
  [[nodiscard]] const Complex& point(std::size_t index) const noexcept { return points_[index]; }
  [[nodiscard]] std::uint32_t label(std::size_t index) const noexcept { return labels_[index]; }
  [[nodiscard]] std::size_t index_of_label(std::uint32_t label) const;

  /// Nearest point index. Ties go to the smaller real part, then the smaller
  /// imaginary part. Throws non-finite-input on NaN/Inf.
  [[nodiscard]] std::uint32_t nearest(Complex s) const;

 private:
  friend Constellation make_constellation(unsigned order);

  unsigned order_ = 0;
  unsigned side_ = 0;
  unsigned bits_ = 0;
  double scale_ = 0.0;
  std::vector<Complex> points_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::uint32_t> label_to_index_;
};

/// Supported orders: 4, 16, 64.
Constellation make_constellation(unsigned order);

struct SymbolVector {
  ComplexVector symbols;
  std::vector<std::uint32_t> indices;

  [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
};

/// Symbol-by-symbol hard decision.
SymbolVector slice(std::span<const Complex> s, const Constellation& c);

SymbolVector random_symbols(std::size_t n, const Constellation& c, Rng& rng);
SymbolVector random_symbols(std::size_t n, const Constellation& c, std::uint64_t seed);

/// Builds a SymbolVector from indices alone.
SymbolVector from_indices(std::vector<std::uint32_t> indices, const Constellation& c);

/// Count of positions where the two index vectors differ.
std::size_t symbol_errors(std::span<const std::uint32_t> decided,
                          std::span<const std::uint32_t> truth);

}  // namespace anpid
