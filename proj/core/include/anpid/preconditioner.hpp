#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "anpid/linalg.hpp"

namespace anpid {

enum class PreconditionerKind { jacobi, gs, ssor };

std::string_view to_string(PreconditionerKind kind) noexcept;

/// Splitting-based preconditioner M built from A = D + L + L^H:
///
///   jacobi: M = D
///   gs:     M = D + L
///   ssor:   M = (D + L) D^-1 (D + L)^H
///
/// M^-1 is never formed; apply() runs triangular solves. When a
/// normalization U (diagonal) is attached, apply() realizes (M U)^-1.
class Preconditioner {
 public:
  /// Throws shape for non-square A, singular-preconditioner for a zero pivot.
  static Preconditioner build(const ComplexMatrix& A, PreconditionerKind kind);

  [[nodiscard]] PreconditionerKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }
  [[nodiscard]] bool normalized() const noexcept { return !inv_u_.empty(); }

  [[nodiscard]] std::span<const Complex> diagonal() const noexcept { return diag_.span(); }
  /// Diagonal of U; empty unless normalized.
  [[nodiscard]] std::span<const Complex> normalization() const noexcept { return u_.span(); }

  /// z = (M U)^-1 r, or M^-1 r when not normalized.
  [[nodiscard]] ComplexVector apply(std::span<const Complex> r, MultiplyTally* t = nullptr) const;
  /// z = M^-1 r regardless of any attached normalization.
  [[nodiscard]] ComplexVector apply_unnormalized(std::span<const Complex> r,
                                                 MultiplyTally* t = nullptr) const;

  /// Copy with U attached. Throws degenerate-normalization on a zero entry.
  [[nodiscard]] Preconditioner with_normalization(ComplexVector u) const;

  /// Dense M, for tests and diagnostics.
  [[nodiscard]] ComplexMatrix dense() const;

 private:
  PreconditionerKind kind_ = PreconditionerKind::jacobi;
  ComplexMatrix lower_;  // D + L; unused for jacobi
  ComplexVector diag_;
  ComplexVector inv_diag_;
  ComplexVector u_;
  ComplexVector inv_u_;
};

/// U = diag(M^-1 A) for the unnormalized preconditioner `p`.
///
/// Jacobi returns exactly ones. GS only needs the leading j+1 entries of the
/// forward solve against column j, so it stops there; SSOR needs the full
/// solve per column. The work is tallied into `t` (setup, not per-iteration).
ComplexVector normalization_matrix(const ComplexMatrix& A, const Preconditioner& p,
                                   MultiplyTally* t = nullptr);

/// Convenience: build + normalize.
Preconditioner normalized_preconditioner(const ComplexMatrix& A, PreconditionerKind kind,
                                         MultiplyTally* t = nullptr);

}  // namespace anpid
