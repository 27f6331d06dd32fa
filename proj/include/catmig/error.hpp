#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace catmig {

enum class ErrorCode {
  // paths and rewriting
  EndpointMismatch,
  Unorientable,
  BudgetExceeded,
  UnknownNode,
  UnknownEdge,
  // schema validation
  DuplicateName,
  DanglingEdge,
  EdgeFromTypeNode,
  IllTypedEquation,
  UnknownBuiltinType,
  // instance validation
  MissingEdgeValue,
  UnknownElement,
  LiteralTypeMismatch,
  DuplicateElementId,
  ConflictingEdgeValue,
  SchemaMismatch,
  // mappings
  MissingAssignment,
  BuiltinMismatch,
  NonFunctorialMapping,
  // migrations
  SigmaDivergence,
  LiteralCollision,
  SigmaUnconstrainedAttribute,
  PiInfinite,
  PiUnconstrainedAttribute,
  ElementLimitExceeded,
  NonConvergentTheory,
  // frontend
  SyntaxError,
  UnresolvedReference,
  HeaderMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code);

struct Diagnostic {
  ErrorCode code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// Base exception for every failure raised by the library. The message is
/// prefixed with the error code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 protected:
  struct Preformatted {};
  Error(ErrorCode code, const std::string& what, Preformatted);

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Raised by the validate_* entry points. Carries every violation found,
/// not just the first; code() is the code of the first diagnostic.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
  bool has(ErrorCode code) const;

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace catmig
