#include "anpid/complexity.hpp"

#include <string>

#include "anpid/error.hpp"

namespace anpid {

double multiply_budget(Algorithm algorithm, std::size_t M, std::size_t N, std::size_t t,
                       std::size_t stage_a_iterations) {
  if (t < 1) throw Error(ErrorCode::invalid_argument, "iteration index starts at 1");
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  const double n2 = n * n;
  const bool first = t == 1;
  const bool stage_a = t <= stage_a_iterations;
  switch (algorithm) {
    case Algorithm::jacobi: return first ? n : n2;
    case Algorithm::gs: return first ? 0.5 * n2 : 1.5 * n2;
    case Algorithm::ssor: return first ? n2 : 2.0 * n2;
    case Algorithm::jacobi_dd: return first ? 2.0 * m * n : n2;
    case Algorithm::anpid_gs:
      if (first) return 0.5 * n2 + 2.0 * m * n;
      return stage_a ? 1.5 * n2 : n2;
    case Algorithm::anpid_ssor:
      if (first) return n2 + 2.0 * m * n;
      return stage_a ? 2.0 * n2 : n2;
    default:
      throw Error(ErrorCode::no_budget,
                  "no per-iteration budget for " + std::string(to_string(algorithm)));
  }
}

}  // namespace anpid
