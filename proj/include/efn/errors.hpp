#pragma once

#include <stdexcept>
#include <string>

namespace efn {

/// Error categories surfaced by the library. The CLI maps them to the
/// machine-readable `error` field of its JSON error report.
enum class ErrorKind {
  InvalidArgument,
  DuplicateConstraint,
  NonPrefixDerivativeOrders,
  EmptyGenerators,
  ZeroOperator,
  TruncationTooShort,
  NotASingularity,
  WindowTooShort,
  RecurrenceUnderdetermined,
  ZeroScale,
  GuessBoundExceeded,
  ValueNotCertifiedZero,
  TailBoundNotReached,
  NotDerivationClosed,
  NotIndependent,
  SingularGauge,
  SaturationCapExceeded,
  BasisInvalid,
  VerificationFailed,
  ParseError,
  UnknownBuiltin,
  SchemaError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DuplicateConstraint: return "DuplicateConstraint";
    case ErrorKind::NonPrefixDerivativeOrders: return "NonPrefixDerivativeOrders";
    case ErrorKind::EmptyGenerators: return "EmptyGenerators";
    case ErrorKind::ZeroOperator: return "ZeroOperator";
    case ErrorKind::TruncationTooShort: return "TruncationTooShort";
    case ErrorKind::NotASingularity: return "NotASingularity";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::RecurrenceUnderdetermined: return "RecurrenceUnderdetermined";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::GuessBoundExceeded: return "GuessBoundExceeded";
    case ErrorKind::ValueNotCertifiedZero: return "ValueNotCertifiedZero";
    case ErrorKind::TailBoundNotReached: return "TailBoundNotReached";
    case ErrorKind::NotDerivationClosed: return "NotDerivationClosed";
    case ErrorKind::NotIndependent: return "NotIndependent";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::SaturationCapExceeded: return "SaturationCapExceeded";
    case ErrorKind::BasisInvalid: return "BasisInvalid";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace efn
