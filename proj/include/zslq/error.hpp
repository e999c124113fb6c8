#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zslq {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNonFiniteInput,
  kMarginViolation,
  kNonConvergence,
  kSingularH,
  kSingularSchurBlock,
  kUnstableClosedLoop,
  kEigenFailure,
  kNegativeLogDetGap,
  kStateBlowup,
  kCertificationCollapse,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// branch on the failure class without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zslq
