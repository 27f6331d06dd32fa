#include "catmig/mapping.hpp"

#include <algorithm>
#include <set>

#include "catmig/error.hpp"

namespace catmig {

const std::string& Mapping::node_image(const std::string& node) const {
  return nodes_.at(source_->node_index(node));
}

const Path& Mapping::edge_image(const std::string& edge) const {
  return edges_.at(source_->edge_index(edge));
}

Mapping validate_mapping(const SchemaPtr& source, const SchemaPtr& target, const MappingDecl& decl) {
  const Graph& cg = source->graph();
  const Graph& dg = target->graph();
  std::vector<Diagnostic> diags;
  auto report = [&](ErrorCode code, std::string msg) { diags.push_back({code, std::move(msg)}); };

  std::vector<std::optional<std::string>> nodes(cg.nodes().size());
  for (const auto& a : decl.nodes) {
    auto c = cg.find_node(a.source);
    auto d = dg.find_node(a.target);
    if (!c) {
      report(ErrorCode::UnknownNode, "'" + a.source + "' is not a node of " + source->name());
      continue;
    }
    if (!d) {
      report(ErrorCode::UnknownNode, "'" + a.target + "' is not a node of " + target->name());
      continue;
    }
    if (nodes[*c]) {
      report(ErrorCode::DuplicateName, "node '" + a.source + "' assigned twice");
      continue;
    }
    const Node& cn = cg.nodes()[*c];
    const Node& dn = dg.nodes()[*d];
    if (cn.kind != dn.kind || (cn.kind == NodeKind::Type && cn.name != dn.name)) {
      report(ErrorCode::BuiltinMismatch, "node " + cn.name + " cannot map to " + dn.name +
                                             " (entities map to entities, builtins to themselves)");
      continue;
    }
    nodes[*c] = a.target;
  }
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    if (nodes[c]) continue;
    const Node& cn = cg.nodes()[c];
    if (cn.kind == NodeKind::Type && target->is_type(cn.name)) {
      nodes[c] = cn.name;
    } else {
      report(ErrorCode::MissingAssignment, "node " + cn.name + " has no image");
    }
  }

  std::vector<std::optional<Path>> edges(cg.edges().size());
  for (const auto& img : decl.edges) {
    auto e = cg.find_edge(img.edge);
    if (!e) {
      report(ErrorCode::UnknownEdge, "'" + img.edge + "' is not an edge of " + source->name());
      continue;
    }
    if (edges[*e]) {
      report(ErrorCode::DuplicateName, "edge '" + img.edge + "' assigned twice");
      continue;
    }
    Path path;
    try {
      path = resolve_path(dg, img.path);
    } catch (const Error& err) {
      report(err.code(), "image of " + img.edge + ": " + err.detail());
      continue;
    }
    const Edge& ce = cg.edges()[*e];
    const auto& src = nodes[*cg.find_node(ce.source)];
    const auto& tgt = nodes[*cg.find_node(ce.target)];
    if (src && tgt && (path.start() != *src || dg.end_of(path) != *tgt)) {
      report(ErrorCode::EndpointMismatch, "edge " + ce.name + ": " + ce.source + " -> " + ce.target +
                                              " needs a path " + *src + " -> " + *tgt + ", but " +
                                              path.to_string() + " runs " + path.start() + " -> " +
                                              dg.end_of(path));
      continue;
    }
    edges[*e] = std::move(path);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!edges[e] && decl.edges.end() == std::find_if(decl.edges.begin(), decl.edges.end(),
                                                      [&](const EdgeImage& i) { return i.edge == cg.edges()[e].name; })) {
      report(ErrorCode::MissingAssignment, "edge " + cg.edges()[e].name + " has no image");
    }
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));

  Mapping m;
  m.source_ = source;
  m.target_ = target;
  for (auto& n : nodes) m.nodes_.push_back(std::move(*n));
  for (auto& e : edges) m.edges_.push_back(std::move(*e));
  return m;
}

Path apply_to_path(const Mapping& mapping, const Path& p) {
  mapping.source()->graph().check(p);
  std::vector<std::string> out;
  for (const auto& e : p.edges()) {
    const Path& img = mapping.edge_image(e);
    out.insert(out.end(), img.edges().begin(), img.edges().end());
  }
  return Path(mapping.node_image(p.start()), std::move(out));
}

Mapping compose_mappings(const Mapping& first, const Mapping& second) {
  if (!same_schema(*first.target(), *second.source())) {
    throw Error(ErrorCode::SchemaMismatch, "cannot compose a mapping into " + first.target()->name() +
                                               " with a mapping out of " + second.source()->name());
  }
  Mapping m;
  m.source_ = first.source_;
  m.target_ = second.target_;
  for (const auto& n : first.nodes_) m.nodes_.push_back(second.node_image(n));
  for (const auto& p : first.edges_) m.edges_.push_back(apply_to_path(second, p));
  return m;
}

Mapping identity_mapping(const SchemaPtr& schema) {
  Mapping m;
  m.source_ = schema;
  m.target_ = schema;
  for (const Node& n : schema->graph().nodes()) m.nodes_.push_back(n.name);
  for (const Edge& e : schema->graph().edges()) m.edges_.push_back(Path(e.source, {e.name}));
  return m;
}

MappingDecl to_decl(const Mapping& mapping, const std::string& name, const std::string& source_name,
                    const std::string& target_name) {
  MappingDecl decl{name, source_name, target_name, {}, {}};
  const Graph& g = mapping.source()->graph();
  for (const Node& n : g.nodes()) decl.nodes.push_back({n.name, mapping.node_image(n.name)});
  for (const Edge& e : g.edges()) decl.edges.push_back({e.name, to_raw(mapping.edge_image(e.name))});
  return decl;
}

std::string_view to_string(FunctorialityKind kind) {
  switch (kind) {
    case FunctorialityKind::Functorial: return "Functorial";
    case FunctorialityKind::NotFunctorial: return "NotFunctorial";
    case FunctorialityKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

std::string FunctorialityVerdict::to_string(const Mapping& mapping) const {
  const auto& eqs = mapping.source()->equations();
  std::string out = std::string(catmig::to_string(kind)) + "\n";
  for (const auto& c : checks) {
    out += "  " + eqs[c.equation].to_string() + "  |->  " + c.lhs_image.to_string() + " = " +
           c.rhs_image.to_string() + "  : " + std::string(catmig::to_string(c.outcome.verdict));
    if (c.outcome.verdict == Verdict::Proven) {
      out += " (" + std::to_string(c.outcome.trace.size()) + (c.outcome.trace.size() == 1 ? " step)" : " steps)");
    } else if (c.outcome.verdict == Verdict::Refuted) {
      out += " (normal forms " + c.outcome.lhs_normal.to_string() + " vs " +
             c.outcome.rhs_normal.to_string() + ")";
    }
    out += "\n";
  }
  return out;
}

FunctorialityVerdict check_functoriality(const Mapping& mapping, const Budget& budget) {
  FunctorialityVerdict verdict;
  const auto& eqs = mapping.source()->equations();
  const Theory& target = mapping.target()->theory();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    EquationCheck c{i, apply_to_path(mapping, eqs[i].lhs), apply_to_path(mapping, eqs[i].rhs), {}};
    c.outcome = prove_equal(target, c.lhs_image, c.rhs_image, budget);
    if (c.outcome.verdict == Verdict::Refuted && !verdict.refuted) verdict.refuted = i;
    if (c.outcome.verdict == Verdict::Unknown) verdict.unknown.push_back(i);
    verdict.checks.push_back(std::move(c));
  }
  if (verdict.refuted) {
    verdict.kind = FunctorialityKind::NotFunctorial;
  } else if (!verdict.unknown.empty()) {
    verdict.kind = FunctorialityKind::Undetermined;
  } else {
    verdict.kind = FunctorialityKind::Functorial;
  }
  return verdict;
}

}  // namespace catmig
