#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace treslev {

enum class ErrorCode {
  InvalidArgument,
  VolumeExceedsCapacity,
  NegativeVolume,
  MissingLife,
  ZeroCapital,
  NonPositiveMargin,
  NonPositiveVolume,
  AtThreshold,
  DegeneratePoints,
  NonNegativeSlope,
  NonPositiveIntercept,
  OutsideValidityDomain,
  ZeroBase,
  MarginZero,
  PositiveInput,
  DegenerateThreshold,
  InfeasibleDrop,
  NonViable,
  MarginBelowResult,
  InvalidTarget,
  EmptyRange,
  RangeOutsideDomain,
  InfeasiblePath,
  IoFailure,
  Config,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::VolumeExceedsCapacity: return "VolumeExceedsCapacity";
    case ErrorCode::NegativeVolume: return "NegativeVolume";
    case ErrorCode::MissingLife: return "MissingLife";
    case ErrorCode::ZeroCapital: return "ZeroCapital";
    case ErrorCode::NonPositiveMargin: return "NonPositiveMargin";
    case ErrorCode::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorCode::AtThreshold: return "AtThreshold";
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::NonNegativeSlope: return "NonNegativeSlope";
    case ErrorCode::NonPositiveIntercept: return "NonPositiveIntercept";
    case ErrorCode::OutsideValidityDomain: return "OutsideValidityDomain";
    case ErrorCode::ZeroBase: return "ZeroBase";
    case ErrorCode::MarginZero: return "MarginZero";
    case ErrorCode::PositiveInput: return "PositiveInput";
    case ErrorCode::DegenerateThreshold: return "DegenerateThreshold";
    case ErrorCode::InfeasibleDrop: return "InfeasibleDrop";
    case ErrorCode::NonViable: return "NonViable";
    case ErrorCode::MarginBelowResult: return "MarginBelowResult";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::RangeOutsideDomain: return "RangeOutsideDomain";
    case ErrorCode::InfeasiblePath: return "InfeasiblePath";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

/// Every library failure surfaces as this exception; `code()` is the stable
/// discriminator, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace treslev
