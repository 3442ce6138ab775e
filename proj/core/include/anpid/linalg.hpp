#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace anpid {

using Complex = std::complex<double>;

/// Dense complex vector. Thin owning wrapper so that vectors and matrices
/// are distinct types at API boundaries.
class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n, Complex value = {}) : data_(n, value) {}
  ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  Complex& operator[](std::size_t i) noexcept { return data_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return data_[i]; }

  [[nodiscard]] Complex* data() noexcept { return data_.data(); }
  [[nodiscard]] const Complex* data() const noexcept { return data_.data(); }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  [[nodiscard]] std::span<Complex> span() noexcept { return data_; }
  [[nodiscard]] std::span<const Complex> span() const noexcept { return data_; }
  operator std::span<const Complex>() const noexcept { return data_; }  // NOLINT

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<Complex> data_;
};

/// Dense column-major complex matrix.
///
/// The Hermitian flag is metadata: constructors that know their output is
/// Hermitian (e.g. Gram products) set it, and consumers may assert on it in
/// debug builds. It is never re-verified in release hot paths.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);
  /// Row-major literal, convenient for small hand-written cases.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[c * rows_ + r];
  }

  [[nodiscard]] std::span<Complex> column(std::size_t c) noexcept {
    return {data_.data() + c * rows_, rows_};
  }
  [[nodiscard]] std::span<const Complex> column(std::size_t c) const noexcept {
    return {data_.data() + c * rows_, rows_};
  }

  [[nodiscard]] std::span<Complex> data() noexcept { return data_; }
  [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

  [[nodiscard]] bool hermitian() const noexcept { return hermitian_; }
  void set_hermitian(bool flag) noexcept { hermitian_ = flag; }

  /// Entry-wise check of a(i,j) == conj(a(j,i)) relative to the largest entry.
  [[nodiscard]] bool is_hermitian(double rel_tol = 1e-12) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
  bool hermitian_ = false;
};

/// Running count of complex scalar multiplies (real-by-complex scalings and
/// divisions each count as one). Kernels add exactly what they execute.
struct MultiplyTally {
  std::uint64_t count = 0;
};

inline void tally(MultiplyTally* t, std::uint64_t n) noexcept {
  if (t != nullptr) t->count += n;
}

// Scalar helpers written out in real arithmetic: std::complex operator* goes
// through the Annex-G NaN recovery path, which is far slower in tight loops.
inline Complex cmul(Complex a, Complex b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline Complex cmul_conj(Complex a, Complex b) noexcept {  // conj(a) * b
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

/// sum_i conj(a_i) b_i
Complex dot(std::span<const Complex> a, std::span<const Complex> b, MultiplyTally* t = nullptr);
double norm_squared(std::span<const Complex> a, MultiplyTally* t = nullptr);
[[nodiscard]] bool is_zero(std::span<const Complex> a) noexcept;
[[nodiscard]] bool all_finite(std::span<const Complex> a) noexcept;

/// out = A x
ComplexVector multiply(const ComplexMatrix& A, std::span<const Complex> x, MultiplyTally* t = nullptr);
/// out = A^H x
ComplexVector adjoint_multiply(const ComplexMatrix& A, std::span<const Complex> x,
                               MultiplyTally* t = nullptr);

struct GramSystem {
  ComplexMatrix A;  ///< H^H H + rho I, Hermitian
  ComplexVector b;  ///< H^H y
};

/// A = H^H H + rho I and b = H^H y. Requires M >= N.
GramSystem gram_and_matched_filter(const ComplexMatrix& H, std::span<const Complex> y, double rho);

/// H^H H only (Hermitian flagged). Shared by callers that try several rho.
ComplexMatrix gram(const ComplexMatrix& H);

/// Returns a copy of A with rho added to the diagonal.
ComplexMatrix add_to_diagonal(const ComplexMatrix& A, double rho);

struct DLSplit {
  ComplexVector diagonal;      ///< D as its diagonal entries
  ComplexMatrix strict_lower;  ///< L, zero on and above the diagonal
};

DLSplit dl_split(const ComplexMatrix& A);

/// Solves T z = r reading only the lower triangle (including diagonal) of T.
/// Cost: N(N-1)/2 + N multiplies.
ComplexVector lower_triangular_solve(const ComplexMatrix& T, std::span<const Complex> r,
                                     MultiplyTally* t = nullptr);

/// Solves T^H z = r for lower-triangular T (i.e. an upper solve on the
/// conjugate transpose) without forming T^H.
ComplexVector adjoint_lower_triangular_solve(const ComplexMatrix& T, std::span<const Complex> r,
                                             MultiplyTally* t = nullptr);

// In-place kernels used by the preconditioners. `inv_diag[i]` must hold
// 1 / T(i,i); `z` holds r on entry and the solution on exit.
void forward_substitute(const ComplexMatrix& T, std::span<const Complex> inv_diag,
                        std::span<Complex> z, MultiplyTally* t = nullptr);
void adjoint_back_substitute(const ComplexMatrix& T, std::span<const Complex> inv_diag,
                             std::span<Complex> z, MultiplyTally* t = nullptr);

/// Cholesky-based solve for Hermitian positive definite A. Baselines and
/// oracles only; the iterative detectors never call it.
ComplexVector exact_solve(const ComplexMatrix& A, std::span<const Complex> b);

}  // namespace anpid
