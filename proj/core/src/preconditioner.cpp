#include "anpid/preconditioner.hpp"

#include <algorithm>
#include <string>

#include "anpid/error.hpp"

namespace anpid {

std::string_view to_string(PreconditionerKind kind) noexcept {
  switch (kind) {
    case PreconditionerKind::jacobi: return "jacobi";
    case PreconditionerKind::gs: return "gs";
    case PreconditionerKind::ssor: return "ssor";
  }
  return "unknown";
}

Preconditioner Preconditioner::build(const ComplexMatrix& A, PreconditionerKind kind) {
  if (!A.square() || A.rows() == 0) {
    throw Error(ErrorCode::shape, "preconditioner needs a non-empty square matrix");
  }
  const std::size_t n = A.rows();
  Preconditioner p;
  p.kind_ = kind;
  p.diag_ = ComplexVector(n);
  p.inv_diag_ = ComplexVector(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex d = A(i, i);
    if (d == Complex{}) {
      throw Error(ErrorCode::singular_preconditioner,
                  "zero diagonal entry at index " + std::to_string(i));
    }
    p.diag_[i] = d;
    p.inv_diag_[i] = 1.0 / d;
  }
  if (kind != PreconditionerKind::jacobi) {
    p.lower_ = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = j; i < n; ++i) p.lower_(i, j) = A(i, j);
    }
  }
  return p;
}

ComplexVector Preconditioner::apply_unnormalized(std::span<const Complex> r,
                                                 MultiplyTally* t) const {
  const std::size_t n = size();
  if (r.size() != n) throw Error(ErrorCode::shape, "preconditioner input length mismatch");
  ComplexVector z(std::vector<Complex>(r.begin(), r.end()));
  switch (kind_) {
    case PreconditionerKind::jacobi:
      for (std::size_t i = 0; i < n; ++i) z[i] = cmul(z[i], inv_diag_[i]);
      tally(t, n);
      break;
    case PreconditionerKind::gs:
      forward_substitute(lower_, inv_diag_.span(), z.span(), t);
      break;
    case PreconditionerKind::ssor:
      forward_substitute(lower_, inv_diag_.span(), z.span(), t);
      for (std::size_t i = 0; i < n; ++i) z[i] = cmul(z[i], diag_[i]);
      tally(t, n);
      adjoint_back_substitute(lower_, inv_diag_.span(), z.span(), t);
      break;
  }
  return z;
}

ComplexVector Preconditioner::apply(std::span<const Complex> r, MultiplyTally* t) const {
  ComplexVector z = apply_unnormalized(r, t);
  if (normalized()) {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = cmul(z[i], inv_u_[i]);
    tally(t, z.size());
  }
  return z;
}

Preconditioner Preconditioner::with_normalization(ComplexVector u) const {
  if (u.size() != size()) throw Error(ErrorCode::shape, "normalization length mismatch");
  Preconditioner p = *this;
  p.inv_u_ = ComplexVector(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == Complex{}) {
      throw Error(ErrorCode::degenerate_normalization,
                  "diag(M^-1 A) vanishes at index " + std::to_string(i));
    }
    p.inv_u_[i] = 1.0 / u[i];
  }
  p.u_ = std::move(u);
  return p;
}

ComplexMatrix Preconditioner::dense() const {
  const std::size_t n = size();
  ComplexMatrix M(n, n);
  switch (kind_) {
    case PreconditionerKind::jacobi:
      for (std::size_t i = 0; i < n; ++i) M(i, i) = diag_[i];
      break;
    case PreconditionerKind::gs:
      M = lower_;
      break;
    case PreconditionerKind::ssor:
      // (D+L) D^-1 (D+L)^H, entry (i,j) = sum_k G(i,k) conj(G(j,k)) / D(k)
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          Complex acc{};
          for (std::size_t k = 0; k <= std::min(i, j); ++k) {
            acc += lower_(i, k) * std::conj(lower_(j, k)) * inv_diag_[k];
          }
          M(i, j) = acc;
        }
      }
      break;
  }
  return M;
}

ComplexVector normalization_matrix(const ComplexMatrix& A, const Preconditioner& p,
                                   MultiplyTally* t) {
  const std::size_t n = p.size();
  if (A.rows() != n || A.cols() != n) throw Error(ErrorCode::shape, "normalization: size mismatch");
  if (p.normalized()) {
    throw Error(ErrorCode::invalid_argument, "normalization needs the unnormalized preconditioner");
  }
  ComplexVector u(n);
  switch (p.kind()) {
    case PreconditionerKind::jacobi:
      for (std::size_t i = 0; i < n; ++i) u[i] = 1.0;
      break;
    case PreconditionerKind::gs: {
      const ComplexMatrix G = p.dense();
      std::vector<Complex> inv(n);
      for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / p.diagonal()[i];
      std::vector<Complex> z(n);
      std::uint64_t work = 0;
      for (std::size_t j = 0; j < n; ++j) {
        // Forward substitution on the leading (j+1)x(j+1) block only.
        for (std::size_t i = 0; i <= j; ++i) z[i] = A(i, j);
        for (std::size_t k = 0; k <= j; ++k) {
          z[k] = cmul(z[k], inv[k]);
          const Complex* col = G.column(k).data();
          for (std::size_t i = k + 1; i <= j; ++i) z[i] -= cmul(col[i], z[k]);
        }
        u[j] = z[j];
        work += (j + 1) * j / 2 + (j + 1);
      }
      tally(t, work);
      break;
    }
    case PreconditionerKind::ssor:
      for (std::size_t j = 0; j < n; ++j) u[j] = p.apply_unnormalized(A.column(j), t)[j];
      break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == Complex{}) {
      throw Error(ErrorCode::degenerate_normalization,
                  "diag(M^-1 A) vanishes at index " + std::to_string(i));
    }
  }
  return u;
}

Preconditioner normalized_preconditioner(const ComplexMatrix& A, PreconditionerKind kind,
                                         MultiplyTally* t) {
  Preconditioner p = Preconditioner::build(A, kind);
  return p.with_normalization(normalization_matrix(A, p, t));
}

}  // namespace anpid
