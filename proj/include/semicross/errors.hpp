#pragma once

#include <stdexcept>
#include <string>

namespace semicross {

enum class ErrorCode {
  DimensionMismatch,
  ShapeMismatch,
  IntegerOverflow,
  NotInCone,
  NotMultiplicative,
  NotStarPreserving,
  OracleInconsistent,
  KernelNotIdeal,
  NotAnIdeal,
  NotInvertibleOnCorner,
  ConstraintViolation,
  SystemMismatch,
  SystemNotRepresentable,
  SupportBlowup,
  InconsistentEquivalence,
  GramNotPSD,
  EmptyWindow,
  MarginTooSmall,
  SupportExceedsWindow,
  ConfigError,
  SystemLoadError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IntegerOverflow: return "IntegerOverflow";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::NotStarPreserving: return "NotStarPreserving";
    case ErrorCode::OracleInconsistent: return "OracleInconsistent";
    case ErrorCode::KernelNotIdeal: return "KernelNotIdeal";
    case ErrorCode::NotAnIdeal: return "NotAnIdeal";
    case ErrorCode::NotInvertibleOnCorner: return "NotInvertibleOnCorner";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::SystemMismatch: return "SystemMismatch";
    case ErrorCode::SystemNotRepresentable: return "SystemNotRepresentable";
    case ErrorCode::SupportBlowup: return "SupportBlowup";
    case ErrorCode::InconsistentEquivalence: return "InconsistentEquivalence";
    case ErrorCode::GramNotPSD: return "GramNotPSD";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::MarginTooSmall: return "MarginTooSmall";
    case ErrorCode::SupportExceedsWindow: return "SupportExceedsWindow";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SystemLoadError: return "SystemLoadError";
  }
  return "Unknown";
}

/// Single exception type for the whole library; `code` identifies the failure
/// class so callers (and tests) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace semicross
