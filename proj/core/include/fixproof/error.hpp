#ifndef FIXPROOF_ERROR_HPP
#define FIXPROOF_ERROR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fixproof {

enum class ErrorCode {
  ParseError,
  PositivityError,
  ScopeError,
  ShapeError,
  UnknownTerm,
  NameClash,
  NotChildOfRoot,
  ContextShape,
  ConstraintMismatch,
  SideCondition,
  EigenCondition,
  BadPremiseCount,
  SequentMismatch,
  CompanionNotAncestor,
  RenamingNotMonotone,
  RenamingIncomplete,
  NotATree,
  ArityMismatch,
  ShapeMismatch,
  NotNormal,
  NonCanonical,
  NotARedex,
  NotStreamType,
  MismatchedInterface,
  OutOfFuel,
  Unsupported,
  Internal,
};

const char* error_code_name(ErrorCode c);

/// Exception type used across the library. `node` is set when the error
/// refers to a specific proof-graph node.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  Error(ErrorCode code, std::uint32_t node, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + " at node " +
                           std::to_string(node) + ": " + message),
        code_(code),
        node_(node) {}

  ErrorCode code() const { return code_; }
  std::optional<std::uint32_t> node() const { return node_; }

 private:
  ErrorCode code_;
  std::optional<std::uint32_t> node_;
};

}  // namespace fixproof

#endif
