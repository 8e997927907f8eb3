#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgsc {

enum class ErrorCode {
  DimensionMismatch = 1,
  NegativeWeight,
  NonFiniteEntry,
  EmptyGroupLabel,
  InvalidArgument,
  ZeroKernel,
  ZeroWeights,
  NotNormalized,
  NormBoundViolated,
  InvalidSubset,
  PlacementFailed,
  ShapeMismatch,
  BadMagic,
  TruncatedPayload,
  UnsupportedNdims,
  IoFailure,
  ConfigError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. The C API maps the code
/// one-to-one onto cgsc_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cgsc
