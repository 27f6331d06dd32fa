#include "catmig/schema.hpp"

#include <algorithm>
#include <set>

#include "catmig/error.hpp"

namespace catmig {

std::optional<BuiltinType> builtin_type(const std::string& name) {
  if (name == "String") return BuiltinType::String;
  if (name == "Int") return BuiltinType::Int;
  return std::nullopt;
}

std::string_view to_string(BuiltinType type) {
  return type == BuiltinType::String ? "String" : "Int";
}

bool Schema::is_entity(const std::string& node) const {
  auto idx = graph().find_node(node);
  return idx && graph().nodes()[*idx].kind == NodeKind::Entity;
}

bool Schema::is_type(const std::string& node) const {
  auto idx = graph().find_node(node);
  return idx && graph().nodes()[*idx].kind == NodeKind::Type;
}

BuiltinType Schema::builtin(const std::string& type_node) const {
  if (!is_type(type_node)) throw Error(ErrorCode::UnknownNode, "'" + type_node + "' is not a type node");
  return *builtin_type(type_node);
}

std::size_t Schema::node_index(const std::string& node) const {
  auto idx = graph().find_node(node);
  if (!idx) throw Error(ErrorCode::UnknownNode, "unknown node '" + node + "' in schema " + name_);
  return *idx;
}

std::size_t Schema::edge_index(const std::string& edge) const {
  auto idx = graph().find_edge(edge);
  if (!idx) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + edge + "' in schema " + name_);
  return *idx;
}

SchemaPtr validate_schema(const SchemaDecl& decl, const Budget& budget) {
  std::vector<Diagnostic> diags;
  auto report = [&](ErrorCode code, std::string msg) { diags.push_back({code, std::move(msg)}); };

  Graph graph;
  for (const auto& name : decl.entities) {
    if (!graph.add_node({name, NodeKind::Entity})) report(ErrorCode::DuplicateName, "node '" + name + "' declared twice");
  }
  for (const auto& name : decl.types) {
    if (!builtin_type(name)) {
      report(ErrorCode::UnknownBuiltinType, "type '" + name + "' is not a builtin (String, Int)");
      continue;
    }
    if (!graph.add_node({name, NodeKind::Type})) report(ErrorCode::DuplicateName, "node '" + name + "' declared twice");
  }

  std::set<std::string> edge_names;
  for (const auto& e : decl.edges) {
    if (!edge_names.insert(e.name).second) {
      report(ErrorCode::DuplicateName, "edge '" + e.name + "' declared twice");
      continue;
    }
    auto src = graph.find_node(e.source);
    auto tgt = graph.find_node(e.target);
    bool ok = true;
    if (!src) {
      report(ErrorCode::DanglingEdge, "edge '" + e.name + "' has undeclared source '" + e.source + "'");
      ok = false;
    }
    if (!tgt) {
      report(ErrorCode::DanglingEdge, "edge '" + e.name + "' has undeclared target '" + e.target + "'");
      ok = false;
    }
    if (src && graph.nodes()[*src].kind == NodeKind::Type) {
      report(ErrorCode::EdgeFromTypeNode, "edge '" + e.name + "' leaves type node '" + e.source + "'");
      ok = false;
    }
    if (ok) graph.add_edge({e.name, e.source, e.target});
  }

  std::vector<PathEquation> equations;
  for (const auto& raw : decl.equations) {
    const std::string text = raw.lhs.to_string() + " = " + raw.rhs.to_string();
    Path lhs, rhs;
    try {
      lhs = resolve_path(graph, raw.lhs);
      rhs = resolve_path(graph, raw.rhs);
    } catch (const Error& e) {
      ErrorCode code = e.code() == ErrorCode::EndpointMismatch ? ErrorCode::IllTypedEquation : e.code();
      report(code, "in equation " + text + ": " + e.detail());
      continue;
    }
    const std::string& lend = graph.end_of(lhs);
    const std::string& rend = graph.end_of(rhs);
    if (lhs.start() != rhs.start() || lend != rend) {
      report(ErrorCode::IllTypedEquation, "equation " + text + " has sides " + lhs.start() + "->" +
                                              lend + " and " + rhs.start() + "->" + rend);
      continue;
    }
    equations.push_back({std::move(lhs), std::move(rhs)});
  }

  if (!diags.empty()) throw ValidationError(std::move(diags));

  std::shared_ptr<Schema> schema(new Schema());
  schema->name_ = decl.name;
  for (const Node& n : graph.nodes()) {
    (n.kind == NodeKind::Entity ? schema->entities_ : schema->types_).push_back(n.name);
  }
  schema->theory_ = complete(Theory(std::move(graph), std::move(equations)), budget);
  return schema;
}

bool same_schema(const Schema& a, const Schema& b) {
  return &a == &b || (a.graph() == b.graph() && a.equations() == b.equations());
}

PathEnumeration hom_set(const Schema& schema, const std::string& a, const std::string& b,
                        const Budget& budget) {
  return enumerate_paths(schema.theory(), a, b, budget);
}

SchemaDecl to_decl(const Schema& schema) {
  SchemaDecl decl;
  decl.name = schema.name();
  decl.entities = schema.entities();
  decl.types = schema.types();
  for (const Edge& e : schema.graph().edges()) decl.edges.push_back({e.name, e.source, e.target});
  for (const auto& eq : schema.equations()) decl.equations.push_back({to_raw(eq.lhs), to_raw(eq.rhs)});
  return decl;
}

}  // namespace catmig
