#include "eegdep/errors.hpp"

namespace eegdep {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::NumericalInstability: return "NumericalInstability";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::MissingCorrelation: return "MissingCorrelation";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::EmptyConfusion: return "EmptyConfusion";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidBand:
      return ErrorCategory::Config;
    case ErrorCode::DegenerateSignal:
    case ErrorCode::NumericalInstability:
    case ErrorCode::InvalidDistribution:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      raw_(message) {}

}  // namespace eegdep
