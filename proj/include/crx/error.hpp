#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crx {

enum class ErrorKind {
  // parsing / input shape
  SyntaxError,
  DuplicateClassError,
  DuplicateMemberError,
  UnknownSuperError,
  MissingInputError,
  // evaluation
  NoSuchMethodError,
  NoSuchFieldError,
  NullTargetError,
  TypeError,
  UnknownVariableError,
  ProceedOutsideAround,
  StepBudgetExceeded,
  // composition (shared)
  InheritanceCycleError,
  MechanismError,
  // compositor
  UnmappedClassError,
  EmptySliceError,
  KindConflictError,
  FieldTypeConflictError,
  UnresolvedUnitError,
  // pointcut-and-advice plans
  UnresolvedAdviceError,
  // open classes
  UnknownTargetError,
  MemberCollisionError,
  AmbiguousParentError,
};

inline std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateClassError: return "DuplicateClassError";
    case ErrorKind::DuplicateMemberError: return "DuplicateMemberError";
    case ErrorKind::UnknownSuperError: return "UnknownSuperError";
    case ErrorKind::MissingInputError: return "MissingInputError";
    case ErrorKind::NoSuchMethodError: return "NoSuchMethodError";
    case ErrorKind::NoSuchFieldError: return "NoSuchFieldError";
    case ErrorKind::NullTargetError: return "NullTargetError";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::UnknownVariableError: return "UnknownVariableError";
    case ErrorKind::ProceedOutsideAround: return "ProceedOutsideAround";
    case ErrorKind::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorKind::InheritanceCycleError: return "InheritanceCycleError";
    case ErrorKind::MechanismError: return "MechanismError";
    case ErrorKind::UnmappedClassError: return "UnmappedClassError";
    case ErrorKind::EmptySliceError: return "EmptySliceError";
    case ErrorKind::KindConflictError: return "KindConflictError";
    case ErrorKind::FieldTypeConflictError: return "FieldTypeConflictError";
    case ErrorKind::UnresolvedUnitError: return "UnresolvedUnitError";
    case ErrorKind::UnresolvedAdviceError: return "UnresolvedAdviceError";
    case ErrorKind::UnknownTargetError: return "UnknownTargetError";
    case ErrorKind::MemberCollisionError: return "MemberCollisionError";
    case ErrorKind::AmbiguousParentError: return "AmbiguousParentError";
  }
  return "Error";
}

// Single error type for the whole framework; `kind` is the machine-checkable
// identity (duality checks compare kinds, the CLI prints them).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace crx
