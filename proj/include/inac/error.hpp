#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inac {

enum class ErrorCode {
  NonIntegerRateRatio,
  NonIntegerGain,
  NonPrimitivePolynomial,
  LengthExceedsPeriod,
  OutOfRange,
  LengthMismatch,
  PayloadLengthMismatch,
  WrongScenario,
  InvalidDelta,
  FitOutOfRange,
  ShiftAlphabetTooLarge,
  UnknownExperiment,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace inac
