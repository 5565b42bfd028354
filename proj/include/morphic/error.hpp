#pragma once

#include <stdexcept>
#include <string>

namespace morphic {

enum class ErrorKind {
  AlphabetMismatch,
  InvalidArgument,
  Parse,
  NotProlongable,
  NormalizationUnsupported,
  NotPrimitive,
  Erasing,
  PreconditionViolated,
  PrefixInvalid,
  BudgetExhausted,
  NotEnoughOccurrences,
  NoOccurrence,
  NoPrimitiveSubmorphism,
  InternalConsistency,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::NotProlongable: return "NotProlongable";
    case ErrorKind::NormalizationUnsupported: return "NormalizationUnsupported";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::Erasing: return "Erasing";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::PrefixInvalid: return "PrefixInvalid";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NotEnoughOccurrences: return "NotEnoughOccurrences";
    case ErrorKind::NoOccurrence: return "NoOccurrence";
    case ErrorKind::NoPrimitiveSubmorphism: return "NoPrimitiveSubmorphism";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace morphic
