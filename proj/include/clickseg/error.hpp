#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clickseg {

enum class ErrorCode {
  InvalidImage,
  SeedOnBarrier,
  SeedOutOfBounds,
  NonSquareRotation,
  DimensionMismatch,
  EmptyInput,
  UndefinedMetric,
  OutOfScaleDomain,
  IoFailure,
  SerializationFailure,
  SchemaViolation,
  StaleReference,
  UnknownImage,
  UnknownProject,
  UsageError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI exit codes, HTTP status mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clickseg
