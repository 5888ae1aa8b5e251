#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conebill {

enum class ErrorCode {
  DimensionMismatch,
  DegenerateArrangement,
  ZeroVector,
  InvalidState,
  ConeMismatch,
  WrongWallCount,
  TooFewEvents,
  AlternationError,
  TooFewBalls,
  NonpositiveMass,
  DegenerateSampling,
  TooManyWalls,
  InvalidConfig,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ConeMismatch: return "ConeMismatch";
    case ErrorCode::WrongWallCount: return "WrongWallCount";
    case ErrorCode::TooFewEvents: return "TooFewEvents";
    case ErrorCode::AlternationError: return "AlternationError";
    case ErrorCode::TooFewBalls: return "TooFewBalls";
    case ErrorCode::NonpositiveMass: return "NonpositiveMass";
    case ErrorCode::DegenerateSampling: return "DegenerateSampling";
    case ErrorCode::TooManyWalls: return "TooManyWalls";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conebill
