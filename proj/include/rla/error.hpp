#pragma once

#include <stdexcept>
#include <string>

namespace rla {

enum class ErrorKind {
  DivisionByZero,
  MixedFields,
  DimensionMismatch,
  InternalInconsistency,
  NotPNilpotent,
  NotAbelian,
  NotPrimeField,
  ShapeMismatch,
  SizeMismatch,
  NotMinimalGenerating,
  ParseError,
  ValidationError,
  Unsupported,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::MixedFields: return "MixedFields";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::NotPNilpotent: return "NotPNilpotent";
    case ErrorKind::NotAbelian: return "NotAbelian";
    case ErrorKind::NotPrimeField: return "NotPrimeField";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NotMinimalGenerating: return "NotMinimalGenerating";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures carry the 1-based source line (0 when not line-anchored).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::ParseError,
              (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + what),
        line_(line),
        message_(what) {}

  int line() const noexcept { return line_; }
  /// The message without kind and line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  std::string message_;
};

}  // namespace rla
