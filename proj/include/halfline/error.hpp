// error.hpp - error kinds raised by the halfline toolkit
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfline {

enum class ErrorKind {
  DimensionMismatch,
  SelfAdjointnessViolated,
  Degenerate,
  NumericalSingularity,
  AngleOutOfRange,
  NegativeCoordinate,
  NonHermitianInput,
  DivergentMoment,
  SingularJost,
  RegimeViolation,
  MeshTooCoarse,
  IndefiniteMass,
  NotNegativePotential,
  EigenvalueNearOne,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SelfAdjointnessViolated: return "SelfAdjointnessViolated";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NumericalSingularity: return "NumericalSingularity";
    case ErrorKind::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::NegativeCoordinate: return "NegativeCoordinate";
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::DivergentMoment: return "DivergentMoment";
    case ErrorKind::SingularJost: return "SingularJost";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorKind::IndefiniteMass: return "IndefiniteMass";
    case ErrorKind::NotNegativePotential: return "NotNegativePotential";
    case ErrorKind::EigenvalueNearOne: return "EigenvalueNearOne";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to a different CLI exit code.
constexpr bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::NumericalSingularity || kind == ErrorKind::SingularJost ||
         kind == ErrorKind::IndefiniteMass || kind == ErrorKind::EigenvalueNearOne;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace halfline
