#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bezapprox {

enum class ErrorKind {
  InvalidArgument,
  DegenerateInterval,
  DegreeZero,
  DegreeOrder,
  DegreeCap,
  DimensionMismatch,
  DuplicateParams,
  ToleranceUnreachable,
  UnsupportedTargetDegree,
  UnsupportedDegree,
  AllZeroCoefficients,
  NotPlanar,
  DegenerateSegment,
  RejectionLimit,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::DegreeOrder: return "DegreeOrder";
    case ErrorKind::DegreeCap: return "DegreeCap";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateParams: return "DuplicateParams";
    case ErrorKind::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorKind::UnsupportedTargetDegree: return "UnsupportedTargetDegree";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::AllZeroCoefficients: return "AllZeroCoefficients";
    case ErrorKind::NotPlanar: return "NotPlanar";
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::RejectionLimit: return "RejectionLimit";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bezapprox
