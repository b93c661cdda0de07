#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moulton {

enum class ErrorKind {
  Collision,
  DimensionMismatch,
  ZeroConfiguration,
  NotNormalized,
  InvalidMass,
  InvalidArgument,
  NoConvergence,
  SizeLimit,
  SizeMismatch,
  RootBracketFailure,
  EmptyInput,
  SpectrumIncomplete,
  IncompatibleOrderings,
  InvalidEpsilon,
  SymmetricPair,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Collision: return "CollisionError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroConfiguration: return "ZeroConfiguration";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InvalidMass: return "InvalidMass";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::RootBracketFailure: return "RootBracketFailure";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SpectrumIncomplete: return "SpectrumIncomplete";
    case ErrorKind::IncompatibleOrderings: return "IncompatibleOrderings";
    case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::SymmetricPair: return "SymmetricPair";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The kind tag
/// lets callers (the CLI in particular) map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics rather than of the inputs.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::NoConvergence || kind_ == ErrorKind::SpectrumIncomplete ||
           kind_ == ErrorKind::RootBracketFailure;
  }

 private:
  ErrorKind kind_;
};

}  // namespace moulton
