#pragma once

#include <stdexcept>
#include <string>

namespace qsetk {

enum class ErrorCode {
  DuplicateKind,
  DepthExceeded,
  PoolExhausted,
  UnknownKind,
  UniverseMismatch,
  IllFormedFormula,
  BoundExceeded,
  KindViolation,
  NotMember,
  CapExceeded,
  NonTerminatingChain,
  UnknownTheorem,
  ZeroVector,
  IndexOutOfRange,
  BadDistribution,
  InvalidDensity,
  NoQuasisetRepresentation,
  NotPure,
  SyntaxError,
  UnboundIdent,
  EvalError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsetk
