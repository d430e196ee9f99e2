#pragma once

#include <stdexcept>
#include <string>

namespace eegdep {

// Every failure the library raises carries one of these codes. The CLI maps
// the category to its exit status (config=2, data=3, numeric=4).
enum class ErrorCode {
  ConfigError,
  InvalidBand,
  SignalTooShort,
  InsufficientData,
  ArityMismatch,
  ParseError,
  SchemaError,
  DegenerateSignal,
  NumericalInstability,
  LengthMismatch,
  InvalidDistribution,
  MissingCorrelation,
  TooFewInstances,
  SingleClassTraining,
  NonFiniteFeature,
  TooFewSubjects,
  EmptyConfusion,
  UnknownChannel,
  UnknownFeature,
  IoError,
};

enum class ErrorCategory { Config, Data, Numeric };

const char* error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return error_category(code_); }
  // Message without the "CodeName: " prefix, for re-wrapping with context.
  const std::string& raw_message() const { return raw_; }

 private:
  ErrorCode code_;
  std::string raw_;
};

}  // namespace eegdep
