#pragma once

#include <stdexcept>
#include <string>

namespace respole {

enum class ErrorKind {
  InvalidArgument,
  InvalidRange,
  DimensionMismatch,
  DegenerateDenominator,
  DoublePoleSingularity,
  EmptyProfile,
  NearDefective,
  TrackingAmbiguity,
  NonConvergence,
  StateTracking,
  NonUnimodal,
  SpanLeak,
  Indeterminate,
};

/// Every failure raised by the core carries one of the kinds above so the
/// C layer can map it onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace respole
