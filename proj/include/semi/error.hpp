#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semi {

enum class ErrorKind {
  AlgebraMismatch,
  NotInvertible,
  SignatureMismatch,
  ParityMismatch,
  OddBlockSingular,
  MissingMap,
  NotNice,
  NotBasePreserving,
  BodyNotZero,
  NonlinearUnknown,
  InvalidArgument,
  SyntaxError,
  SemanticError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::ParityMismatch: return "ParityMismatch";
    case ErrorKind::OddBlockSingular: return "OddBlockSingular";
    case ErrorKind::MissingMap: return "MissingMap";
    case ErrorKind::NotNice: return "NotNice";
    case ErrorKind::NotBasePreserving: return "NotBasePreserving";
    case ErrorKind::BodyNotZero: return "BodyNotZero";
    case ErrorKind::NonlinearUnknown: return "NonlinearUnknown";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SemanticError: return "SemanticError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace semi
