#ifndef RABISPLIT_ERROR_HPP
#define RABISPLIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rabisplit {

enum class ErrorCode {
  NonPositiveRate,
  ZeroEmitters,
  InvalidConfig,
  AboveThreshold,
  DomainError,
  SplitSpectrum,
  UnstableSystem,
  StepTooLarge,
  ConvergenceFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::ZeroEmitters: return "ZeroEmitters";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::AboveThreshold: return "AboveThreshold";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SplitSpectrum: return "SplitSpectrum";
    case ErrorCode::UnstableSystem: return "UnstableSystem";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
  }
  return "Unknown";
}

// Broad classes used for process exit codes.
enum class ErrorClass { Validation, Domain, Internal };

constexpr ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRate:
    case ErrorCode::ZeroEmitters:
    case ErrorCode::InvalidConfig:
      return ErrorClass::Validation;
    case ErrorCode::AboveThreshold:
    case ErrorCode::DomainError:
    case ErrorCode::SplitSpectrum:
    case ErrorCode::UnstableSystem:
    case ErrorCode::StepTooLarge:
      return ErrorClass::Domain;
    case ErrorCode::ConvergenceFailure:
      return ErrorClass::Internal;
  }
  return ErrorClass::Internal;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rabisplit

#endif  // RABISPLIT_ERROR_HPP
