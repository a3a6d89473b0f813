#include "sigmadep/errors.hpp"

namespace sigmadep {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::division_by_zero: return "division-by-zero";
    case ErrorCode::pole_at_point: return "pole-at-point";
    case ErrorCode::unsupported_root_structure: return "unsupported-root-structure";
    case ErrorCode::unsupported_tower: return "unsupported-tower";
    case ErrorCode::invalid_tower: return "invalid-tower";
    case ErrorCode::rational_shift_ratio: return "rational-shift-ratio";
    case ErrorCode::inconsistent_word: return "inconsistent-word";
    case ErrorCode::non_constant_lambda: return "non-constant-lambda";
    case ErrorCode::singular_b: return "singular-B";
    case ErrorCode::singular_a_at_index: return "singular-A-at-index";
    case ErrorCode::zero_trailing_coefficient: return "zero-trailing-coefficient";
    case ErrorCode::all_samples_hit_poles: return "all-samples-hit-poles";
    case ErrorCode::syntax_error: return "syntax-error";
    case ErrorCode::unknown_variable: return "unknown-variable";
    case ErrorCode::zero_denominator: return "zero-denominator";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::limit_exceeded: return "limit-exceeded";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace sigmadep
