#pragma once

#include <stdexcept>
#include <string>

namespace polystar {

enum class ErrorCode {
  Domain,
  NotConverged,
  PairingUnavailable,
  BudgetExceeded,
  RescaleRequired,
  LengthMismatch,
  Schema,
  InvariantViolation,
  UnknownConstraint,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polystar
