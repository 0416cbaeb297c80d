#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diffent {

enum class ErrorCode {
  InvalidArgument,
  UnknownLabel,
  GridTooSmall,
  GridMismatch,
  AliasingDetected,
  EmptyGrid,
  SingularNetwork,
  NotContractive,
  NotUnitary,
  SpectralMismatch,
  CutoffTooSmall,
  NonPhysical,
  DimensionMismatch,
  EmptyPartition,
  TooManyModes,
  NonAnalyticInput,
  NotPure,
  InvalidEfficiency,
  Parse,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library is reported through this type. `value()`
// carries the one number some errors attach (the required cutoff for
// CutoffTooSmall, the lost-energy fraction for SpectralMismatch, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }
  bool has_value() const noexcept { return !std::isnan(value_); }

 private:
  ErrorCode code_;
  double value_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::AliasingDetected: return "AliasingDetected";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::SingularNetwork: return "SingularNetwork";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::SpectralMismatch: return "SpectralMismatch";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::NonPhysical: return "NonPhysical";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::TooManyModes: return "TooManyModes";
    case ErrorCode::NonAnalyticInput: return "NonAnalyticInput";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::InvalidEfficiency: return "InvalidEfficiency";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace diffent
