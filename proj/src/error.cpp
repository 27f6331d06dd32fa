#include "catmig/error.hpp"

#include <algorithm>

namespace catmig {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::Unorientable: return "Unorientable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::EdgeFromTypeNode: return "EdgeFromTypeNode";
    case ErrorCode::IllTypedEquation: return "IllTypedEquation";
    case ErrorCode::UnknownBuiltinType: return "UnknownBuiltinType";
    case ErrorCode::MissingEdgeValue: return "MissingEdgeValue";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::LiteralTypeMismatch: return "LiteralTypeMismatch";
    case ErrorCode::DuplicateElementId: return "DuplicateElementId";
    case ErrorCode::ConflictingEdgeValue: return "ConflictingEdgeValue";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::MissingAssignment: return "MissingAssignment";
    case ErrorCode::BuiltinMismatch: return "BuiltinMismatch";
    case ErrorCode::NonFunctorialMapping: return "NonFunctorialMapping";
    case ErrorCode::SigmaDivergence: return "SigmaDivergence";
    case ErrorCode::LiteralCollision: return "LiteralCollision";
    case ErrorCode::SigmaUnconstrainedAttribute: return "SigmaUnconstrainedAttribute";
    case ErrorCode::PiInfinite: return "PiInfinite";
    case ErrorCode::PiUnconstrainedAttribute: return "PiUnconstrainedAttribute";
    case ErrorCode::ElementLimitExceeded: return "ElementLimitExceeded";
    case ErrorCode::NonConvergentTheory: return "NonConvergentTheory";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

Error::Error(ErrorCode code, const std::string& what, Preformatted)
    : std::runtime_error(what), code_(code), detail_(what) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    if (i > 0) out += "\n";
    out += std::string(to_string(diagnostics[i].code)) + ": " + diagnostics[i].message;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? ErrorCode::SyntaxError : diagnostics.front().code,
            join_diagnostics(diagnostics), Preformatted{}),
      diagnostics_(std::move(diagnostics)) {}

bool ValidationError::has(ErrorCode code) const {
  return std::any_of(diagnostics_.begin(), diagnostics_.end(),
                     [code](const Diagnostic& d) { return d.code == code; });
}

}  // namespace catmig
