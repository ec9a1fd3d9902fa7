#pragma once

#include <stdexcept>
#include <string>

namespace steerlab {

enum class ErrorKind {
  CapExceeded,
  UniverseMismatch,
  UnknownAttribute,
  UnknownValue,
  UnknownCandidate,
  ContextOutsideUniverse,
  InvalidName,
  SyntaxError,
  SemanticError,
  InvalidInput,
};

/// Library-level error. Carries a kind so callers (the CLI in particular)
/// can map failures onto the exit-code contract without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::UnknownAttribute: return "UnknownAttribute";
    case ErrorKind::UnknownValue: return "UnknownValue";
    case ErrorKind::UnknownCandidate: return "UnknownCandidate";
    case ErrorKind::ContextOutsideUniverse: return "ContextOutsideUniverse";
    case ErrorKind::InvalidName: return "InvalidName";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SemanticError: return "SemanticError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

}  // namespace steerlab
