#ifndef DGV_ERROR_HPP
#define DGV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dgv {

enum class ErrorKind {
  Syntax,
  UnknownVariable,
  DivisionByZeroPolynomial,
  IdenticallyZeroDenominator,
  PoleAtPoint,
  ChartMismatch,
  DegreeOverflow,
  DegreeUnderflow,
  RankDeficientAtPoint,
  NotLagrangian,
  NotComposableTangent,
  NotComposableCovector,
  SingularSystem,
  NonInvertibleBisection,
  RankDrop,
  GenericSolveFailed,
  WrongKernel,
  WellDefinednessViolation,
  NoLift,
  FamilyMismatch,
  Schema,
  UnknownCommand,
  Internal,
};

const char* error_kind_name(ErrorKind k);

// All failures that are programming or input errors (as opposed to a
// negative verification verdict, which goes into a Report) are thrown
// as Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DivisionByZeroPolynomial: return "DivisionByZeroPolynomial";
    case ErrorKind::IdenticallyZeroDenominator: return "IdenticallyZeroDenominator";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorKind::RankDeficientAtPoint: return "RankDeficientAtPoint";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::NotComposableTangent: return "NotComposableTangent";
    case ErrorKind::NotComposableCovector: return "NotComposableCovector";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NonInvertibleBisection: return "NonInvertibleBisection";
    case ErrorKind::RankDrop: return "RankDrop";
    case ErrorKind::GenericSolveFailed: return "GenericSolveFailed";
    case ErrorKind::WrongKernel: return "WrongKernel";
    case ErrorKind::WellDefinednessViolation: return "WellDefinednessViolation";
    case ErrorKind::NoLift: return "NoLift";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

}  // namespace dgv

#endif
