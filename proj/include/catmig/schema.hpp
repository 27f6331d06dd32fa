#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catmig/path.hpp"
#include "catmig/presentation.hpp"

namespace catmig {

/// The two literal carriers a schema may declare as type nodes.
enum class BuiltinType { String, Int };

std::optional<BuiltinType> builtin_type(const std::string& name);
std::string_view to_string(BuiltinType type);

struct EdgeDecl {
  std::string name;
  std::string source;
  std::string target;

  bool operator==(const EdgeDecl&) const = default;
};

struct EquationDecl {
  RawPath lhs;
  RawPath rhs;

  bool operator==(const EquationDecl&) const = default;
};

/// Unvalidated schema as produced by the parser.
struct SchemaDecl {
  std::string name;
  std::vector<std::string> entities;
  std::vector<std::string> types;
  std::vector<EdgeDecl> edges;
  std::vector<EquationDecl> equations;

  bool operator==(const SchemaDecl&) const = default;
};

/// A finitely presented category: entity and type nodes, generating edges,
/// path equations, and the completed rewrite system for those equations.
/// Only obtainable through validate_schema.
class Schema {
 public:
  const std::string& name() const noexcept { return name_; }
  const Graph& graph() const noexcept { return theory_.graph(); }
  const Theory& theory() const noexcept { return theory_; }
  const std::vector<PathEquation>& equations() const noexcept { return theory_.equations(); }

  /// Entity node names in declaration order.
  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<std::string>& types() const noexcept { return types_; }

  bool is_entity(const std::string& node) const;
  bool is_type(const std::string& node) const;
  /// Builtin carrier of a type node; throws UnknownNode for anything else.
  BuiltinType builtin(const std::string& type_node) const;

  /// Node index in graph().nodes(); throws UnknownNode.
  std::size_t node_index(const std::string& node) const;
  std::size_t edge_index(const std::string& edge) const;

 private:
  friend std::shared_ptr<const Schema> validate_schema(const SchemaDecl&, const Budget&);
  Schema() = default;

  std::string name_;
  std::vector<std::string> entities_;
  std::vector<std::string> types_;
  Theory theory_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

/// Checks every structural invariant, reporting all violations at once via
/// ValidationError, then completes the equational theory with `budget`.
SchemaPtr validate_schema(const SchemaDecl& decl, const Budget& budget = {});

/// Same graph and equations (names of the schemas themselves may differ).
bool same_schema(const Schema& a, const Schema& b);

/// Normal-form morphisms a -> b; see enumerate_paths.
PathEnumeration hom_set(const Schema& schema, const std::string& a, const std::string& b,
                        const Budget& budget = {});

SchemaDecl to_decl(const Schema& schema);

}  // namespace catmig
