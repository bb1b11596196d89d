#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qspin {

enum class ErrorKind {
  NonUnitAxis,
  NonUnitQuaternion,
  NonUnitPolarization,
  IndexOutOfRange,
  InvalidTimeSpan,
  StepTooLarge,
  DegenerateParams,
  ZeroField,
  EmptyRange,
  DegenerateStep,
  SuperluminalSpeed,
  InvalidArgument,
  Config,
  Io,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonUnitAxis: return "NonUnitAxis";
    case ErrorKind::NonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorKind::NonUnitPolarization: return "NonUnitPolarization";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidTimeSpan: return "InvalidTimeSpan";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::DegenerateParams: return "DegenerateParams";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::DegenerateStep: return "DegenerateStep";
    case ErrorKind::SuperluminalSpeed: return "SuperluminalSpeed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qspin
