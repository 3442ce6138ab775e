#include "anpid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anpid/error.hpp"

namespace anpid {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_square(const ComplexMatrix& A, const char* what) {
  if (!A.square() || A.rows() == 0) {
    throw Error(ErrorCode::shape, std::string(what) + " needs a non-empty square matrix, got " +
                                      dims(A.rows(), A.cols()));
  }
}

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::shape, std::string(what) + ": length " + std::to_string(got) +
                                      ", expected " + std::to_string(want));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  I.set_hermitian(true);
  return I;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  ComplexMatrix out(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::shape, "ragged matrix literal");
    std::size_t j = 0;
    for (const auto& v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  if (!square()) return false;
  double scale = 0.0;
  for (const auto& v : data_) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * std::max(scale, 1.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = j; i < rows_; ++i) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b, MultiplyTally* t) {
  require_length(b.size(), a.size(), "dot");
  double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
  std::size_t i = 0;
  const std::size_t n = a.size();
  for (; i + 1 < n; i += 2) {
    re0 += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im0 += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    re1 += a[i + 1].real() * b[i + 1].real() + a[i + 1].imag() * b[i + 1].imag();
    im1 += a[i + 1].real() * b[i + 1].imag() - a[i + 1].imag() * b[i + 1].real();
  }
  if (i < n) {
    re0 += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im0 += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  tally(t, n);
  return {re0 + re1, im0 + im1};
}

double norm_squared(std::span<const Complex> a, MultiplyTally* t) {
  double acc = 0.0;
  for (const auto& v : a) acc += v.real() * v.real() + v.imag() * v.imag();
  tally(t, a.size());
  return acc;
}

bool is_zero(std::span<const Complex> a) noexcept {
  return std::all_of(a.begin(), a.end(), [](const Complex& v) { return v == Complex{}; });
}

bool all_finite(std::span<const Complex> a) noexcept {
  return std::all_of(a.begin(), a.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexVector multiply(const ComplexMatrix& A, std::span<const Complex> x, MultiplyTally* t) {
  require_length(x.size(), A.cols(), "multiply");
  ComplexVector out(A.rows());
  Complex* o = out.data();
  for (std::size_t j = 0; j < A.cols(); ++j) {
    const Complex xj = x[j];
    const Complex* col = A.column(j).data();
    for (std::size_t i = 0; i < A.rows(); ++i) o[i] += cmul(col[i], xj);
  }
  tally(t, A.rows() * A.cols());
  return out;
}

ComplexVector adjoint_multiply(const ComplexMatrix& A, std::span<const Complex> x,
                               MultiplyTally* t) {
  require_length(x.size(), A.rows(), "adjoint_multiply");
  ComplexVector out(A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j) out[j] = dot(A.column(j), x);
  tally(t, A.rows() * A.cols());
  return out;
}

ComplexMatrix gram(const ComplexMatrix& H) {
  const std::size_t n = H.cols();
  if (H.rows() == 0 || n == 0) throw Error(ErrorCode::shape, "empty channel matrix");
  if (n > H.rows()) {
    throw Error(ErrorCode::shape, "overloaded system " + dims(H.rows(), n) + " (N > M)");
  }
  ComplexMatrix A(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      const Complex v = dot(H.column(i), H.column(j));
      A(i, j) = v;
      A(j, i) = std::conj(v);
    }
    A(j, j) = A(j, j).real();
  }
  A.set_hermitian(true);
  return A;
}

ComplexMatrix add_to_diagonal(const ComplexMatrix& A, double rho) {
  require_square(A, "add_to_diagonal");
  ComplexMatrix out = A;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += rho;
  return out;
}

GramSystem gram_and_matched_filter(const ComplexMatrix& H, std::span<const Complex> y,
                                   double rho) {
  if (!(rho >= 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be >= 0");
  require_length(y.size(), H.rows(), "received vector");
  GramSystem sys{add_to_diagonal(gram(H), rho), adjoint_multiply(H, y)};
  sys.A.set_hermitian(true);
  return sys;
}

DLSplit dl_split(const ComplexMatrix& A) {
  require_square(A, "dl_split");
  const std::size_t n = A.rows();
  DLSplit out{ComplexVector(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.diagonal[j] = A(j, j);
    for (std::size_t i = j + 1; i < n; ++i) out.strict_lower(i, j) = A(i, j);
  }
  return out;
}

void forward_substitute(const ComplexMatrix& T, std::span<const Complex> inv_diag,
                        std::span<Complex> z, MultiplyTally* t) {
  const std::size_t n = T.rows();
  // Column-oriented: once z_j is final, eliminate it from every later row.
  for (std::size_t j = 0; j < n; ++j) {
    const Complex zj = cmul(z[j], inv_diag[j]);
    z[j] = zj;
    const Complex* col = T.column(j).data();
    for (std::size_t i = j + 1; i < n; ++i) z[i] -= cmul(col[i], zj);
  }
  tally(t, n * (n - 1) / 2 + n);
}

void adjoint_back_substitute(const ComplexMatrix& T, std::span<const Complex> inv_diag,
                             std::span<Complex> z, MultiplyTally* t) {
  const std::size_t n = T.rows();
  // Row i of T^H is the conjugate of column i of T, which is contiguous.
  for (std::size_t i = n; i-- > 0;) {
    const Complex* col = T.column(i).data();
    Complex acc = z[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= cmul_conj(col[j], z[j]);
    z[i] = cmul(acc, std::conj(inv_diag[i]));
  }
  tally(t, n * (n - 1) / 2 + n);
}

namespace {

ComplexVector reciprocal_diagonal(const ComplexMatrix& T) {
  ComplexVector inv(T.rows());
  for (std::size_t i = 0; i < T.rows(); ++i) {
    if (T(i, i) == Complex{}) {
      throw Error(ErrorCode::singular_preconditioner,
                  "zero diagonal entry at index " + std::to_string(i));
    }
    inv[i] = 1.0 / T(i, i);
  }
  return inv;
}

}  // namespace

ComplexVector lower_triangular_solve(const ComplexMatrix& T, std::span<const Complex> r,
                                     MultiplyTally* t) {
  require_square(T, "lower_triangular_solve");
  require_length(r.size(), T.rows(), "right-hand side");
  const ComplexVector inv = reciprocal_diagonal(T);
  ComplexVector z(std::vector<Complex>(r.begin(), r.end()));
  forward_substitute(T, inv, z.span(), t);
  return z;
}

ComplexVector adjoint_lower_triangular_solve(const ComplexMatrix& T, std::span<const Complex> r,
                                             MultiplyTally* t) {
  require_square(T, "adjoint_lower_triangular_solve");
  require_length(r.size(), T.rows(), "right-hand side");
  const ComplexVector inv = reciprocal_diagonal(T);
  ComplexVector z(std::vector<Complex>(r.begin(), r.end()));
  adjoint_back_substitute(T, inv, z.span(), t);
  return z;
}

ComplexVector exact_solve(const ComplexMatrix& A, std::span<const Complex> b) {
  require_square(A, "exact_solve");
  require_length(b.size(), A.rows(), "right-hand side");
  const std::size_t n = A.rows();

  // Lower Cholesky factor, A = L L^H, built column by column.
  ComplexMatrix L(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double diagonal = A(j, j).real();
    double pivot = diagonal;
    for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(L(j, k));
    // A pivot lost to cancellation means the matrix is singular to working
    // precision; treat it like a negative one.
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) *
                         std::abs(diagonal);
    if (!(pivot > floor) || !std::isfinite(pivot)) {
      throw Error(ErrorCode::not_spd, "non-positive pivot at column " + std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex acc = A(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= cmul(L(i, k), std::conj(L(j, k)));
      L(i, j) = acc / ljj;
    }
  }

  ComplexVector inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / L(i, i);
  ComplexVector z(std::vector<Complex>(b.begin(), b.end()));
  forward_substitute(L, inv, z.span());
  adjoint_back_substitute(L, inv, z.span());
  return z;
}

}  // namespace anpid
