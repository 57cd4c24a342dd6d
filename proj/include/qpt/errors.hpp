#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

enum class ErrorCode {
  InvalidArgument,
  SingularSystem,
  ResidualTooLarge,
  NumericalBreakdown,
  SizeTooLarge,
  NonUniqueSteadyState,
  InsufficientPoints,
  NonPositiveCurrent,
  ZeroBias,
  EmptyRange,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct SingularSystemError : Error {
  explicit SingularSystemError(const std::string& m) : Error(ErrorCode::SingularSystem, m) {}
};
struct ResidualTooLargeError : Error {
  explicit ResidualTooLargeError(const std::string& m) : Error(ErrorCode::ResidualTooLarge, m) {}
};
struct NumericalBreakdownError : Error {
  explicit NumericalBreakdownError(const std::string& m) : Error(ErrorCode::NumericalBreakdown, m) {}
};
struct SizeTooLargeError : Error {
  explicit SizeTooLargeError(const std::string& m) : Error(ErrorCode::SizeTooLarge, m) {}
};
struct NonUniqueSteadyStateError : Error {
  explicit NonUniqueSteadyStateError(const std::string& m) : Error(ErrorCode::NonUniqueSteadyState, m) {}
};
struct InsufficientPointsError : Error {
  explicit InsufficientPointsError(const std::string& m) : Error(ErrorCode::InsufficientPoints, m) {}
};
struct NonPositiveCurrentError : Error {
  explicit NonPositiveCurrentError(const std::string& m) : Error(ErrorCode::NonPositiveCurrent, m) {}
};
struct ZeroBiasError : Error {
  explicit ZeroBiasError(const std::string& m) : Error(ErrorCode::ZeroBias, m) {}
};
struct EmptyRangeError : Error {
  explicit EmptyRangeError(const std::string& m) : Error(ErrorCode::EmptyRange, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCode::Io, m) {}
};
struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& m) : Error(ErrorCode::InvalidArgument, m) {}
};

}  // namespace qpt
