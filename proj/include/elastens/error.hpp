#pragma once

#include <stdexcept>
#include <string>

namespace elastens {

enum class ErrorCode {
  DimensionTooSmall,
  DimensionTooLarge,
  DimensionMismatch,
  SymmetryViolation,
  NonFiniteEntry,
  ParseError,
  NoConvergence,
  NotNonnegative,
  NotPsd,
  AsymmetricUnfolding,
  Asymmetric,
  ConditionInapplicable,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace elastens
