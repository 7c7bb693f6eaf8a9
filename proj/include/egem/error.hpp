#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace egem {

enum class ErrorCode {
  InvalidArgument,
  InvalidRange,
  InvalidRank,
  Numeric,
  DegenerateTrace,
  DegenerateWeights,
  NotPsd,
  NotPd,
  Infeasible,
  NonConvergence,
  DimensionMismatch,
  LabelOutOfRange,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable category next to the message.
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

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::InvalidRank: return "invalid-rank";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::DegenerateTrace: return "degenerate-trace";
    case ErrorCode::DegenerateWeights: return "degenerate-weights";
    case ErrorCode::NotPsd: return "not-psd";
    case ErrorCode::NotPd: return "not-pd";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::LabelOutOfRange: return "label-out-of-range";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace egem
