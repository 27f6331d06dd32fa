#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catmig/schema.hpp"

namespace catmig {

struct NodeAssignment {
  std::string source;
  std::string target;

  bool operator==(const NodeAssignment&) const = default;
};

struct EdgeImage {
  std::string edge;
  RawPath path;

  bool operator==(const EdgeImage&) const = default;
};

/// Unvalidated mapping as produced by the parser. Type nodes may be left
/// out; they default to the same builtin in the target.
struct MappingDecl {
  std::string name;
  std::string source;
  std::string target;
  std::vector<NodeAssignment> nodes;
  std::vector<EdgeImage> edges;

  bool operator==(const MappingDecl&) const = default;
};

/// A functor presentation: nodes to nodes and generating edges to paths.
/// Functoriality (equations sent to provable equations) is a separate check.
class Mapping {
 public:
  const SchemaPtr& source() const noexcept { return source_; }
  const SchemaPtr& target() const noexcept { return target_; }

  const std::string& node_image(const std::string& node) const;
  const Path& edge_image(const std::string& edge) const;

 private:
  friend Mapping validate_mapping(const SchemaPtr&, const SchemaPtr&, const MappingDecl&);
  friend Mapping compose_mappings(const Mapping&, const Mapping&);
  friend Mapping identity_mapping(const SchemaPtr&);

  SchemaPtr source_;
  SchemaPtr target_;
  std::vector<std::string> nodes_;  // by source node index
  std::vector<Path> edges_;         // by source edge index
};

/// Checks totality, builtin preservation and endpoint compatibility, with
/// every violation reported.
Mapping validate_mapping(const SchemaPtr& source, const SchemaPtr& target, const MappingDecl& decl);

/// Homomorphic extension of the edge assignment.
Path apply_to_path(const Mapping& mapping, const Path& p);

/// Diagrammatic: `first` then `second`. Throws SchemaMismatch.
Mapping compose_mappings(const Mapping& first, const Mapping& second);

Mapping identity_mapping(const SchemaPtr& schema);

MappingDecl to_decl(const Mapping& mapping, const std::string& name, const std::string& source_name,
                    const std::string& target_name);

enum class FunctorialityKind { Functorial, NotFunctorial, Undetermined };

std::string_view to_string(FunctorialityKind kind);

struct EquationCheck {
  std::size_t equation = 0;
  Path lhs_image;
  Path rhs_image;
  ProofOutcome outcome;
};

struct FunctorialityVerdict {
  FunctorialityKind kind = FunctorialityKind::Functorial;
  /// One entry per source equation, in order.
  std::vector<EquationCheck> checks;
  /// First refuted equation, for NotFunctorial.
  std::optional<std::size_t> refuted;
  /// Equations whose proof came back Unknown.
  std::vector<std::size_t> unknown;

  std::string to_string(const Mapping& mapping) const;
};

/// Proves F(p) = F(q) in the target for every source equation p = q.
FunctorialityVerdict check_functoriality(const Mapping& mapping, const Budget& budget = {});

}  // namespace catmig
