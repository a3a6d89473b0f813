#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigmadep {

// Machine-readable failure categories. The string form (error_code_name) is
// what the CLI reports and what scripts match on.
enum class ErrorCode {
  division_by_zero,
  pole_at_point,
  unsupported_root_structure,
  unsupported_tower,
  invalid_tower,
  rational_shift_ratio,
  inconsistent_word,
  non_constant_lambda,
  singular_b,
  singular_a_at_index,
  zero_trailing_coefficient,
  all_samples_hit_poles,
  syntax_error,
  unknown_variable,
  zero_denominator,
  dimension_mismatch,
  limit_exceeded,
  invalid_argument,
};

std::string_view error_code_name(ErrorCode code);

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the byte offset into the input and what was expected.
class ParseError : public EngineError {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t position,
             std::string expected = {})
      : EngineError(code, message), position_(position), expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace sigmadep
