#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "catmig/schema.hpp"

namespace catmig {

/// Position of an element within the carrier of the node it belongs to.
struct Element {
  std::size_t index = 0;
  auto operator<=>(const Element&) const = default;
};

using Literal = std::variant<std::string, std::int64_t>;
using Value = std::variant<Element, Literal>;

/// Quoted for strings (escaping `"`, `\`, newline, tab and CR), decimal
/// for integers.
std::string render_literal(const Literal& literal);

/// A value as written in the text format: a bare token (element id or
/// integer) or a quoted string.
struct RawValue {
  enum class Kind { Bare, Quoted };
  Kind kind = Kind::Bare;
  std::string text;

  static RawValue bare(std::string t) { return {Kind::Bare, std::move(t)}; }
  static RawValue quoted(std::string t) { return {Kind::Quoted, std::move(t)}; }
  bool operator==(const RawValue&) const = default;
};

struct CarrierDecl {
  std::string node;
  std::vector<std::string> ids;

  bool operator==(const CarrierDecl&) const = default;
};

struct EdgeAssignment {
  std::string source;
  RawValue value;

  bool operator==(const EdgeAssignment&) const = default;
};

struct EdgeMapDecl {
  std::string edge;
  std::vector<EdgeAssignment> entries;

  bool operator==(const EdgeMapDecl&) const = default;
};

/// Unvalidated instance as produced by the parser.
struct InstanceDecl {
  std::string name;
  std::string schema;
  std::vector<CarrierDecl> carriers;
  std::vector<EdgeMapDecl> edges;

  bool operator==(const InstanceDecl&) const = default;
};

/// A finite functor from a schema to Set: a carrier of opaque element ids
/// for every entity node and a total function for every edge. Carriers keep
/// their insertion order. Equations are not enforced here; see
/// check_constraints.
class Instance {
 public:
  /// Builds an instance from already-resolved data. `carriers` and
  /// `edge_values` are indexed like the schema's graph nodes and edges; each
  /// edge vector is aligned with its source carrier. Throws ValidationError
  /// when a value is out of range or of the wrong kind.
  static Instance from_parts(SchemaPtr schema, std::vector<std::vector<std::string>> carriers,
                             std::vector<std::vector<Value>> edge_values);

  const SchemaPtr& schema() const noexcept { return schema_; }

  const std::vector<std::string>& carrier(const std::string& node) const;
  const std::vector<std::string>& carrier(std::size_t node_index) const { return carriers_.at(node_index); }
  std::optional<std::size_t> find(const std::string& node, const std::string& id) const;

  const std::vector<Value>& edge_values(std::size_t edge_index) const { return edge_values_.at(edge_index); }
  const Value& apply(const std::string& edge, std::size_t element) const;

  /// Element id or literal text of a value that lives at `node`.
  std::string render(const std::string& node, const Value& value) const;

  std::size_t total_elements() const;

  /// Equal schema, carriers (including order) and edge values.
  bool operator==(const Instance& other) const;

 private:
  SchemaPtr schema_;
  std::vector<std::vector<std::string>> carriers_;
  std::vector<std::unordered_map<std::string, std::size_t>> index_;
  std::vector<std::vector<Value>> edge_values_;
};

using InstancePtr = std::shared_ptr<const Instance>;

/// Checks totality and codomains, reporting every problem. Bare tokens are
/// element ids unless the edge targets Int; String values must be quoted.
Instance validate_instance(const SchemaPtr& schema, const InstanceDecl& decl);

InstanceDecl to_decl(const Instance& instance, const std::string& name, const std::string& schema_name);

/// Follows the edges of `p` from element `x` of carrier(p.start()).
Value eval_path(const Instance& instance, const Path& p, std::size_t x);
Value eval_path(const Instance& instance, const Path& p, const std::string& id);

struct Violation {
  std::size_t constraint = 0;
  std::string constraint_text;
  std::string element;
  std::string lhs;
  std::string rhs;

  bool operator==(const Violation&) const = default;
};

struct ViolationReport {
  std::vector<Violation> violations;

  bool empty() const noexcept { return violations.empty(); }
  std::size_t size() const noexcept { return violations.size(); }
  std::string to_string() const;
};

/// Evaluates both sides of every schema equation at every element of its
/// start carrier. Ordered by equation index, then carrier order.
ViolationReport check_constraints(const Instance& instance);

/// A natural transformation between instances on the same schema, given by
/// one function per entity node. Literals are fixed.
struct InstanceMorphism {
  InstancePtr source;
  InstancePtr target;
  /// Indexed by graph node; entries for type nodes stay empty.
  std::vector<std::vector<std::size_t>> components;

  std::size_t image(const std::string& node, std::size_t element) const;
  std::string to_string() const;
};

InstanceMorphism identity_hom(const InstancePtr& instance);
/// `first` then `second`. Throws SchemaMismatch if they are not composable.
InstanceMorphism compose_homs(const InstanceMorphism& first, const InstanceMorphism& second);

/// Naturality on every generating edge; attribute edges must agree exactly.
ViolationReport check_hom(const InstanceMorphism& h);

enum class HomCompleteness { Complete, Capped };

struct HomEnumeration {
  std::vector<InstanceMorphism> homs;
  HomCompleteness completeness = HomCompleteness::Complete;
};

/// All homomorphisms I -> J by backtracking over elements in schema and
/// carrier order. Returns at most `cap` homs; Capped if more exist.
HomEnumeration enumerate_homs(const InstancePtr& from, const InstancePtr& to, std::size_t cap);

struct HomCount {
  std::size_t count = 0;
  HomCompleteness completeness = HomCompleteness::Complete;
};

/// Same search as enumerate_homs without materializing the morphisms.
HomCount count_homs(const InstancePtr& from, const InstancePtr& to, std::size_t cap);

/// An invertible homomorphism I -> J if one exists.
std::optional<InstanceMorphism> iso_check(const InstancePtr& from, const InstancePtr& to);

}  // namespace catmig
