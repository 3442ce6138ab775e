#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anpid {

enum class ErrorCode {
  shape,
  singular_preconditioner,
  not_spd,
  bad_order,
  non_finite_input,
  invalid_geometry,
  degenerate_geometry,
  intractable,
  degenerate_column,
  degenerate_first_decision,
  degenerate_normalization,
  no_budget,
  invalid_argument,
};

/// Stable tag for an error code, e.g. "singular-preconditioner".
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above. The
/// message is prefixed with the tag so `what()` is greppable in logs.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anpid
