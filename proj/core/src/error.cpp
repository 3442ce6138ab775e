#include "anpid/error.hpp"

namespace anpid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::shape: return "shape";
    case ErrorCode::singular_preconditioner: return "singular-preconditioner";
    case ErrorCode::not_spd: return "not-spd";
    case ErrorCode::bad_order: return "bad-order";
    case ErrorCode::non_finite_input: return "non-finite-input";
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::degenerate_geometry: return "degenerate-geometry";
    case ErrorCode::intractable: return "intractable";
    case ErrorCode::degenerate_column: return "degenerate-column";
    case ErrorCode::degenerate_first_decision: return "degenerate-first-decision";
    case ErrorCode::degenerate_normalization: return "degenerate-normalization";
    case ErrorCode::no_budget: return "no-budget";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

}  // namespace anpid
