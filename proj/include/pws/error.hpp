#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pws {

enum class ErrorCode {
  evaluation_error,
  invalid_side,
  not_on_surface,
  degenerate_tangency,
  gradient_vanishes,
  diverging_fixed_point,
  no_convergence,
  singular_jacobian,
  bracket_error,
  no_real_separation,
  crossing_localization_failed,
  invalid_initial_condition,
  transversality_violation,
  step_too_large,
  runaway_switching,
  event_mismatch,
  insufficient_data,
  unsupported_system,
  invalid_argument,
  config_error,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by bad user input rather than a numerical failure.
[[nodiscard]] bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pws
