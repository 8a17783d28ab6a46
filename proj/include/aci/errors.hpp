#pragma once

#include <stdexcept>
#include <string>

namespace aci {

enum class ErrorCode {
  NegativeMass,
  SumNotOne,
  ShapeMismatch,
  RowNotNormalized,
  UnknownName,
  ParamOutOfRange,
  SizeLimit,
  TooManyCells,
  TooLarge,
  EmptyInput,
  EmptySlice,
  NotReached,
  StateCapExceeded,
  ProtocolError,
  DegenerateCovariance,
  NoSolution,
  BadInput,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::TooManyCells: return "TooManyCells";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::NotReached: return "NotReached";
    case ErrorCode::StateCapExceeded: return "StateCapExceeded";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace aci
