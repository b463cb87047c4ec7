#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srpave {

enum class Errc {
  ZeroPolynomial,
  NotRealRooted,
  DegreeMismatch,
  LengthMismatch,
  SumMismatch,
  DimensionMismatch,
  ZeroScale,
  WrongArity,
  BudgetExceeded,
  ParamOutOfRange,
  HypothesisViolated,
  DescentStuck,
  MonotonicityViolated,
  NotAboveRoots,
  PoleAtPoint,
  InvalidPMF,
  NotAValidKernel,
  ZeroProbabilityEvent,
  NotPSDContraction,
  CenteringFailed,
  InvalidWeights,
  SpecializationMismatch,
  InvalidInput,
  IOError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::NotRealRooted: return "NotRealRooted";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SumMismatch: return "SumMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::WrongArity: return "WrongArity";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::DescentStuck: return "DescentStuck";
    case Errc::MonotonicityViolated: return "MonotonicityViolated";
    case Errc::NotAboveRoots: return "NotAboveRoots";
    case Errc::PoleAtPoint: return "PoleAtPoint";
    case Errc::InvalidPMF: return "InvalidPMF";
    case Errc::NotAValidKernel: return "NotAValidKernel";
    case Errc::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case Errc::NotPSDContraction: return "NotPSDContraction";
    case Errc::CenteringFailed: return "CenteringFailed";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::SpecializationMismatch: return "SpecializationMismatch";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::IOError: return "IOError";
  }
  return "Unknown";
}

/// Every domain failure in the library is reported as an Error carrying a
/// machine-readable code; the message holds the human context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace srpave
