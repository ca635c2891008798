#pragma once

#include <stdexcept>
#include <string>

namespace padyn {

enum class ErrorCode {
  NotAUnit,
  PreconditionViolated,
  PrecisionExhausted,
  SingularJacobian,
  SearchSpaceTooLarge,
  SyntaxError,
  NonIntegralCoefficient,
  UnknownVariable,
  InvalidArgument,
  MismatchedRing,
  Singular,
  CapExceeded,
  NotAPPower,
  DegenerateBound,
  UnsupportedPrime,
  ModelRejected,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace padyn
