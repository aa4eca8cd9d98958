#pragma once

#include <stdexcept>
#include <string>

namespace qf {

enum class ErrorKind {
  InvalidArgument,
  ParseError,
  NotPositiveDefinite,
  SingularForm,
  NotIntegral,
  BudgetExceeded,
  PrecisionTooLow,
  NoIsotropicVector,
  DimensionLimit,
  ZeroVector,
  NotInLattice,
  NotARoot,
  NotNegativeRoot,
  DifferentSheet,
  BadDecomposition,
  IsotropicVector,
  EmptyGenus,
  NonPositiveInput,
  NotHyperbolic,
  SharedEndpoint,
  SearchExhausted,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularForm: return "SingularForm";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::NoIsotropicVector: return "NoIsotropicVector";
    case ErrorKind::DimensionLimit: return "DimensionLimit";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotInLattice: return "NotInLattice";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::NotNegativeRoot: return "NotNegativeRoot";
    case ErrorKind::DifferentSheet: return "DifferentSheet";
    case ErrorKind::BadDecomposition: return "BadDecomposition";
    case ErrorKind::IsotropicVector: return "IsotropicVector";
    case ErrorKind::EmptyGenus: return "EmptyGenus";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::SharedEndpoint: return "SharedEndpoint";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace qf
