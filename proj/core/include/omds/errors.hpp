#pragma once

#include <stdexcept>
#include <string>

namespace omds {

enum class ErrorCode {
  ConfigError,
  NonPositiveParameter,
  InconsistentTiming,
  DimensionMismatch,
  ZeroTxSymbol,
  SnapshotTimeMismatch,
  DegenerateGeometry,
  NonPositiveRange,
  TimeOutOfRange,
  UnboundJoint,
  TooFewSamples,
  BadPadLength,
  SeriesTooShort,
  EmptySpectrogram,
  NoPeriodicity,
  NonPositiveInput,
  UnsupportedFormat,
  IoFailure,
};

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw SimError(code, what);
}

}  // namespace omds
