#pragma once

#include <span>

#include "anpid/linalg.hpp"

namespace anpid {

/// Damping factor minimizing ||y - H d_t|| over omega, where
/// d_t = omega d_prev + (1 - omega) x_t.
///
/// With tau = y - H x_t and nu = H d_prev - H x_t this is
/// Re(nu^H tau) / ||nu||^2. Returns 0 when nu vanishes (memory carries no
/// information, so d_t = x_t). Cost: 2MN + 2M multiplies.
double optimal_damping(const ComplexMatrix& H, std::span<const Complex> y,
                       std::span<const Complex> x_t, std::span<const Complex> d_prev,
                       MultiplyTally* t = nullptr);

/// optimal_damping with d_prev = 0, i.e. 1 - Re(y^H H x_1) / ||H x_1||^2.
///
/// Evaluated through the same tau/nu expressions as optimal_damping so the
/// two agree bit for bit. Throws degenerate-first-decision if H x_1 = 0.
/// Cost: MN + 2M multiplies.
double fixed_damping(const ComplexMatrix& H, std::span<const Complex> y,
                     std::span<const Complex> x_1, MultiplyTally* t = nullptr);

/// d = omega d_prev + (1 - omega) x. Cost: 2N.
ComplexVector damp(std::span<const Complex> d_prev, std::span<const Complex> x, double omega,
                   MultiplyTally* t = nullptr);

}  // namespace anpid
