#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wolst {

enum class ErrorCode {
  NotInvertible,
  FactoringBudgetExceeded,
  BudgetExceeded,
  DenominatorNotCoprime,
  ZeroNumerator,
  PreconditionViolated,
  InexactDivision,
  ConstructionAssertFailure,
  AssertionFailure,
  NotApplicable,
  VersionMismatch,
  ParamsMismatch,
  CorruptFile,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::FactoringBudgetExceeded: return "FactoringBudgetExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DenominatorNotCoprime: return "DenominatorNotCoprime";
    case ErrorCode::ZeroNumerator: return "ZeroNumerator";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InexactDivision: return "InexactDivision";
    case ErrorCode::ConstructionAssertFailure: return "ConstructionAssertFailure";
    case ErrorCode::AssertionFailure: return "AssertionFailure";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ParamsMismatch: return "ParamsMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wolst
