#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "anpid/linalg.hpp"
#include "anpid/modem.hpp"
#include "anpid/preconditioner.hpp"

namespace anpid {

enum class Algorithm {
  zf,
  lmmse,
  mlsd,
  mfb,
  jacobi,
  gs,
  ssor,
  jacobi_dd,
  gs_dd,
  ssor_dd,
  ngs_dd,
  nssor_dd,
  anpid_gs,
  anpid_ssor,
};

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;
/// Every enum value, in declaration order.
std::span<const Algorithm> all_algorithms() noexcept;

[[nodiscard]] bool is_iterative(Algorithm a) noexcept;

enum class DampingMode {
  per_iteration,  ///< recompute the optimal factor at every iteration
  fixed,          ///< optimal factor at t = 1, then frozen
};

std::string_view to_string(DampingMode m) noexcept;
std::optional<DampingMode> parse_damping_mode(std::string_view name) noexcept;

enum class AnpidVariant { gs, ssor };

struct DetectorConfig {
  Algorithm algorithm = Algorithm::anpid_gs;
  std::size_t iterations = 10;          ///< T (ANPID: T_A + T_B)
  std::size_t stage_a_iterations = 3;   ///< T_A, ANPID only
  DampingMode damping = DampingMode::fixed;
  /// Regularization added to H^H H. Unset: 0 for ZF, sigma_v^2 for LMMSE and
  /// the undamped SI methods, 0 for the damped/ANPID family.
  std::optional<double> rho;

  /// Throws invalid-argument.
  void validate() const;
  /// Label used in reports, e.g. "anpid_gs".
  [[nodiscard]] std::string_view name() const noexcept { return to_string(algorithm); }
};

/// Regularization actually used for `cfg` at noise variance `sigma_v2`.
double resolve_rho(const DetectorConfig& cfg, double sigma_v2) noexcept;

/// One iteration: estimate s_t, decision x_t = Gamma(s_t), damping vector
/// d_t and factor omega_t (absent for undamped methods), and the multiplies
/// executed inside that iteration.
struct IterationRecord {
  ComplexVector estimate;
  SymbolVector decision;
  ComplexVector damping;
  std::optional<double> omega;
  std::uint64_t multiplies = 0;
};

struct DetectorResult {
  SymbolVector decision;
  std::vector<IterationRecord> trace;
  std::uint64_t multiply_count = 0;    ///< sum over trace
  std::uint64_t setup_multiplies = 0;  ///< normalization and other one-off work
};

/// Gamma(A^-1 b) with A = H^H H + rho I via Cholesky. rho = 0 gives ZF.
DetectorResult zf_lmmse(const ComplexMatrix& H, std::span<const Complex> y, double rho,
                        const Constellation& c);

/// Exhaustive minimizer of ||y - H x||^2. Guarded to order^N <= 2^20.
SymbolVector mlsd_bruteforce(const ComplexMatrix& H, std::span<const Complex> y,
                             const Constellation& c);

/// Interference-free matched-filter decision Gamma(x + D^-1 H^H v),
/// D = diag(H^H H).
SymbolVector mfb_bound(const ComplexMatrix& H, std::span<const Complex> x_true,
                       std::span<const Complex> v, const Constellation& c);

/// s_t = s_{t-1} + M^-1 (b - A s_{t-1}) for t = 1..T.
DetectorResult si_iterate(const ComplexMatrix& A, std::span<const Complex> b,
                          const Preconditioner& precond, std::span<const Complex> s0,
                          std::size_t T, const Constellation& c);

/// Damped demodulation from d_0 = 0:
///   s_t = d_{t-1} + P (b - A d_{t-1}),  x_t = Gamma(s_t),
///   d_t = omega_t d_{t-1} + (1 - omega_t) x_t,
/// with P = (M U)^-1 when `precond` carries a normalization, else M^-1.
DetectorResult dd_iterate(const ComplexMatrix& A, std::span<const Complex> b,
                          const ComplexMatrix& H, std::span<const Complex> y,
                          const Preconditioner& precond, const Constellation& c, std::size_t T,
                          DampingMode mode);

/// Two-stage detector: T_A normalized GS/SSOR damped iterations, then T_B
/// Jacobi damped iterations continuing from the stage-A damping vector.
/// Both damping factors are fixed at t = 1; the Jacobi one comes from a
/// separate Jacobi first step on the same (b, d_0 = 0).
DetectorResult anpid(const ComplexMatrix& A, std::span<const Complex> b, const ComplexMatrix& H,
                     std::span<const Complex> y, const Constellation& c, AnpidVariant variant,
                     std::size_t stage_a, std::size_t stage_b);

/// Everything a detector may need for one received vector. `gram` is H^H H
/// (no regularization) and `b` is H^H y; both are shared across algorithms.
/// `x_true` and `noise` are only consulted by the matched-filter bound.
struct DetectionInput {
  const ComplexMatrix& H;
  std::span<const Complex> y;
  const ComplexMatrix& gram;
  std::span<const Complex> b;
  const Constellation& constellation;
  double sigma_v2 = 0.0;
  std::span<const Complex> x_true{};
  std::span<const Complex> noise{};
};

/// Runs `cfg` on `in`. Non-iterative methods return a single-entry trace.
DetectorResult detect(const DetectorConfig& cfg, const DetectionInput& in);

}  // namespace anpid
