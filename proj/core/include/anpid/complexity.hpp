#pragma once

#include <cstddef>

#include "anpid/detectors.hpp"

namespace anpid {

/// Per-iteration complex-multiply budget for iteration t >= 1 of the
/// square-order detectors:
///
///   algorithm     t = 1           t >= 2
///   jacobi        N               N^2
///   gs            0.5 N^2         1.5 N^2
///   ssor          N^2             2 N^2
///   jacobi_dd     2MN             N^2
///   anpid_gs      0.5 N^2 + 2MN   1.5 N^2 (stage A), N^2 (stage B)
///   anpid_ssor    N^2 + 2MN       2 N^2 (stage A), N^2 (stage B)
///
/// Linear-order terms are not part of the budget. One-off normalization work
/// is excluded (it is reported as setup). Throws no-budget for algorithms
/// without an entry.
double multiply_budget(Algorithm algorithm, std::size_t M, std::size_t N, std::size_t t,
                       std::size_t stage_a_iterations = 3);

}  // namespace anpid
