#include "catmig/instance.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "catmig/error.hpp"

namespace catmig {

std::string render_literal(const Literal& literal) {
  if (const auto* i = std::get_if<std::int64_t>(&literal)) return std::to_string(*i);
  const auto& s = std::get<std::string>(literal);
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

std::optional<std::int64_t> parse_int(const std::string& text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

}  // namespace

Instance Instance::from_parts(SchemaPtr schema, std::vector<std::vector<std::string>> carriers,
                              std::vector<std::vector<Value>> edge_values) {
  const Graph& g = schema->graph();
  std::vector<Diagnostic> diags;
  if (carriers.size() != g.nodes().size() || edge_values.size() != g.edges().size()) {
    throw ValidationError({{ErrorCode::SchemaMismatch, "instance data does not match schema shape"}});
  }
  Instance inst;
  inst.index_.resize(carriers.size());
  for (std::size_t n = 0; n < carriers.size(); ++n) {
    if (g.nodes()[n].kind == NodeKind::Type && !carriers[n].empty()) {
      diags.push_back({ErrorCode::UnknownNode, "type node " + g.nodes()[n].name + " cannot have a carrier"});
    }
    for (std::size_t i = 0; i < carriers[n].size(); ++i) {
      if (!inst.index_[n].emplace(carriers[n][i], i).second) {
        diags.push_back({ErrorCode::DuplicateElementId,
                         "element '" + carriers[n][i] + "' appears twice in " + g.nodes()[n].name});
      }
    }
  }
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    std::size_t src = *g.find_node(e.source);
    std::size_t tgt = *g.find_node(e.target);
    if (edge_values[ei].size() != carriers[src].size()) {
      diags.push_back({ErrorCode::MissingEdgeValue, "edge " + e.name + " is not total"});
      continue;
    }
    for (const Value& v : edge_values[ei]) {
      bool ok = false;
      if (g.nodes()[tgt].kind == NodeKind::Entity) {
        const auto* el = std::get_if<Element>(&v);
        ok = el && el->index < carriers[tgt].size();
      } else {
        const auto* lit = std::get_if<Literal>(&v);
        ok = lit && (schema->builtin(e.target) == BuiltinType::String
                         ? std::holds_alternative<std::string>(*lit)
                         : std::holds_alternative<std::int64_t>(*lit));
      }
      if (!ok) {
        diags.push_back({ErrorCode::LiteralTypeMismatch, "edge " + e.name + " has a value outside " + e.target});
        break;
      }
    }
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));
  inst.schema_ = std::move(schema);
  inst.carriers_ = std::move(carriers);
  inst.edge_values_ = std::move(edge_values);
  return inst;
}

const std::vector<std::string>& Instance::carrier(const std::string& node) const {
  return carriers_.at(schema_->node_index(node));
}

std::optional<std::size_t> Instance::find(const std::string& node, const std::string& id) const {
  const auto& idx = index_.at(schema_->node_index(node));
  auto it = idx.find(id);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

const Value& Instance::apply(const std::string& edge, std::size_t element) const {
  return edge_values_.at(schema_->edge_index(edge)).at(element);
}

std::string Instance::render(const std::string& node, const Value& value) const {
  if (const auto* el = std::get_if<Element>(&value)) return carrier(node).at(el->index);
  return render_literal(std::get<Literal>(value));
}

std::size_t Instance::total_elements() const {
  std::size_t n = 0;
  for (const auto& c : carriers_) n += c.size();
  return n;
}

bool Instance::operator==(const Instance& other) const {
  return same_schema(*schema_, *other.schema_) && carriers_ == other.carriers_ &&
         edge_values_ == other.edge_values_;
}

Instance validate_instance(const SchemaPtr& schema, const InstanceDecl& decl) {
  const Graph& g = schema->graph();
  std::vector<Diagnostic> diags;
  auto report = [&](ErrorCode code, std::string msg) { diags.push_back({code, std::move(msg)}); };

  std::vector<std::vector<std::string>> carriers(g.nodes().size());
  std::vector<std::unordered_map<std::string, std::size_t>> index(g.nodes().size());
  std::set<std::string> seen_nodes;
  for (const auto& c : decl.carriers) {
    auto n = g.find_node(c.node);
    if (!n) {
      report(ErrorCode::UnknownNode, "unknown node '" + c.node + "'");
      continue;
    }
    if (g.nodes()[*n].kind != NodeKind::Entity) {
      report(ErrorCode::UnknownNode, "'" + c.node + "' is a type node and has no carrier");
      continue;
    }
    if (!seen_nodes.insert(c.node).second) {
      report(ErrorCode::DuplicateName, "carrier of '" + c.node + "' given twice");
      continue;
    }
    for (const auto& id : c.ids) {
      if (!index[*n].emplace(id, carriers[*n].size()).second) {
        report(ErrorCode::DuplicateElementId, "element '" + id + "' appears twice in " + c.node);
        continue;
      }
      carriers[*n].push_back(id);
    }
  }

  std::vector<std::vector<std::optional<Value>>> values(g.edges().size());
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    values[ei].resize(carriers[*g.find_node(g.edges()[ei].source)].size());
  }
  std::set<std::string> seen_edges;
  for (const auto& m : decl.edges) {
    auto ei = g.find_edge(m.edge);
    if (!ei) {
      report(ErrorCode::UnknownEdge, "unknown edge '" + m.edge + "'");
      continue;
    }
    if (!seen_edges.insert(m.edge).second) {
      report(ErrorCode::DuplicateName, "edge map '" + m.edge + "' given twice");
      continue;
    }
    const Edge& e = g.edges()[*ei];
    const std::size_t src = *g.find_node(e.source);
    const std::size_t tgt = *g.find_node(e.target);
    for (const auto& entry : m.entries) {
      auto x = index[src].find(entry.source);
      if (x == index[src].end()) {
        report(ErrorCode::UnknownElement, "edge " + e.name + ": '" + entry.source + "' is not in " + e.source);
        continue;
      }
      auto& slot = values[*ei][x->second];
      if (slot) {
        report(ErrorCode::ConflictingEdgeValue, "edge " + e.name + " given twice for '" + entry.source + "'");
        continue;
      }
      const std::string where = "edge " + e.name + " at '" + entry.source + "': ";
      if (g.nodes()[tgt].kind == NodeKind::Entity) {
        if (entry.value.kind != RawValue::Kind::Bare) {
          report(ErrorCode::LiteralTypeMismatch, where + "expected an element of " + e.target + ", got a string literal");
          continue;
        }
        auto y = index[tgt].find(entry.value.text);
        if (y == index[tgt].end()) {
          report(ErrorCode::UnknownElement, where + "'" + entry.value.text + "' is not in " + e.target);
          continue;
        }
        slot = Element{y->second};
      } else if (schema->builtin(e.target) == BuiltinType::String) {
        if (entry.value.kind != RawValue::Kind::Quoted) {
          report(ErrorCode::LiteralTypeMismatch, where + "String values must be quoted, got " + entry.value.text);
          continue;
        }
        slot = Literal{entry.value.text};
      } else {
        auto parsed = entry.value.kind == RawValue::Kind::Bare ? parse_int(entry.value.text) : std::nullopt;
        if (!parsed) {
          report(ErrorCode::LiteralTypeMismatch, where + "expected an Int, got " + entry.value.text);
          continue;
        }
        slot = Literal{*parsed};
      }
    }
  }

  std::vector<std::vector<Value>> edge_values(g.edges().size());
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    const std::size_t src = *g.find_node(e.source);
    for (std::size_t x = 0; x < values[ei].size(); ++x) {
      if (!values[ei][x]) {
        report(ErrorCode::MissingEdgeValue, "edge " + e.name + " has no value for '" + carriers[src][x] + "'");
        continue;
      }
      edge_values[ei].push_back(*values[ei][x]);
    }
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return Instance::from_parts(schema, std::move(carriers), std::move(edge_values));
}

InstanceDecl to_decl(const Instance& instance, const std::string& name, const std::string& schema_name) {
  const Schema& s = *instance.schema();
  const Graph& g = s.graph();
  InstanceDecl decl;
  decl.name = name;
  decl.schema = schema_name;
  for (const auto& node : s.entities()) decl.carriers.push_back({node, instance.carrier(node)});
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    const auto& src = instance.carrier(e.source);
    if (src.empty()) continue;
    EdgeMapDecl m{e.name, {}};
    for (std::size_t x = 0; x < src.size(); ++x) {
      const Value& v = instance.edge_values(ei)[x];
      RawValue raw;
      if (const auto* el = std::get_if<Element>(&v)) {
        raw = RawValue::bare(instance.carrier(e.target)[el->index]);
      } else if (const auto* str = std::get_if<std::string>(&std::get<Literal>(v))) {
        raw = RawValue::quoted(*str);
      } else {
        raw = RawValue::bare(std::to_string(std::get<std::int64_t>(std::get<Literal>(v))));
      }
      m.entries.push_back({src[x], std::move(raw)});
    }
    decl.edges.push_back(std::move(m));
  }
  return decl;
}

Value eval_path(const Instance& instance, const Path& p, std::size_t x) {
  const Schema& s = *instance.schema();
  if (x >= instance.carrier(p.start()).size()) {
    throw Error(ErrorCode::UnknownElement, "element index out of range for " + p.start());
  }
  Value cur = Element{x};
  for (const auto& edge : p.edges()) {
    const auto* el = std::get_if<Element>(&cur);
    if (!el) throw Error(ErrorCode::EndpointMismatch, "path " + p.to_string() + " continues past a literal");
    cur = instance.edge_values(s.edge_index(edge)).at(el->index);
  }
  return cur;
}

Value eval_path(const Instance& instance, const Path& p, const std::string& id) {
  auto x = instance.find(p.start(), id);
  if (!x) throw Error(ErrorCode::UnknownElement, "'" + id + "' is not in " + p.start());
  return eval_path(instance, p, *x);
}

std::string ViolationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += "violation of " + v.constraint_text + " at " + v.element + ": " + v.lhs + " != " + v.rhs + "\n";
  }
  return out;
}

ViolationReport check_constraints(const Instance& instance) {
  const Schema& s = *instance.schema();
  ViolationReport report;
  for (std::size_t i = 0; i < s.equations().size(); ++i) {
    const PathEquation& eq = s.equations()[i];
    const std::string& end = s.graph().end_of(eq.lhs);
    const auto& carrier = instance.carrier(eq.lhs.start());
    for (std::size_t x = 0; x < carrier.size(); ++x) {
      Value l = eval_path(instance, eq.lhs, x);
      Value r = eval_path(instance, eq.rhs, x);
      if (l != r) {
        report.violations.push_back(
            {i, eq.to_string(), carrier[x], instance.render(end, l), instance.render(end, r)});
      }
    }
  }
  return report;
}

std::size_t InstanceMorphism::image(const std::string& node, std::size_t element) const {
  return components.at(source->schema()->node_index(node)).at(element);
}

std::string InstanceMorphism::to_string() const {
  const Schema& s = *source->schema();
  std::string out;
  for (const auto& node : s.entities()) {
    const auto& comp = components[s.node_index(node)];
    out += node + ": {";
    for (std::size_t x = 0; x < comp.size(); ++x) {
      if (x > 0) out += ", ";
      out += source->carrier(node)[x] + " -> " + target->carrier(node)[comp[x]];
    }
    out += "}\n";
  }
  return out;
}

InstanceMorphism identity_hom(const InstancePtr& instance) {
  InstanceMorphism h{instance, instance, {}};
  const Graph& g = instance->schema()->graph();
  h.components.resize(g.nodes().size());
  for (std::size_t n = 0; n < g.nodes().size(); ++n) {
    for (std::size_t x = 0; x < instance->carrier(n).size(); ++x) h.components[n].push_back(x);
  }
  return h;
}

InstanceMorphism compose_homs(const InstanceMorphism& first, const InstanceMorphism& second) {
  if (!(*first.target == *second.source)) {
    throw Error(ErrorCode::SchemaMismatch, "homomorphisms are not composable");
  }
  InstanceMorphism h{first.source, second.target, first.components};
  for (std::size_t n = 0; n < h.components.size(); ++n) {
    for (auto& y : h.components[n]) y = second.components[n][y];
  }
  return h;
}

ViolationReport check_hom(const InstanceMorphism& h) {
  const Instance& I = *h.source;
  const Instance& J = *h.target;
  const Schema& s = *I.schema();
  const Graph& g = s.graph();
  ViolationReport report;
  if (!same_schema(s, *J.schema())) {
    report.violations.push_back({0, "same schema", "", s.name(), J.schema()->name()});
    return report;
  }
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    const std::size_t src = s.node_index(e.source);
    const std::size_t tgt = s.node_index(e.target);
    const bool attribute = g.nodes()[tgt].kind == NodeKind::Type;
    for (std::size_t x = 0; x < I.carrier(src).size(); ++x) {
      const Value& ix = I.edge_values(ei)[x];
      const Value& jhx = J.edge_values(ei)[h.components[src][x]];
      Value lhs = attribute ? ix : Value{Element{h.components[tgt][std::get<Element>(ix).index]}};
      if (lhs != jhx) {
        report.violations.push_back({ei, "naturality of " + e.name, I.carrier(src)[x],
                                     J.render(e.target, lhs), J.render(e.target, jhx)});
      }
    }
  }
  return report;
}

namespace {

// Backtracking search shared by hom enumeration, counting and iso search.
// Each check is attached to the variable assigned last among those it reads.
class HomSearch {
 public:
  HomSearch(const Instance& from, const Instance& to, bool injective)
      : I_(from), J_(to), injective_(injective) {
    const Schema& s = *I_.schema();
    const Graph& g = s.graph();
    components_.resize(g.nodes().size());
    std::vector<std::vector<std::size_t>> var_of(g.nodes().size());
    for (const auto& node : s.entities()) {
      std::size_t n = s.node_index(node);
      components_[n].assign(I_.carrier(n).size(), 0);
      for (std::size_t x = 0; x < I_.carrier(n).size(); ++x) {
        var_of[n].push_back(vars_.size());
        vars_.push_back({n, x, {}, {}});
      }
    }
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      const Edge& e = g.edges()[ei];
      std::size_t src = s.node_index(e.source);
      std::size_t tgt = s.node_index(e.target);
      for (std::size_t x = 0; x < I_.carrier(src).size(); ++x) {
        std::size_t vx = var_of[src][x];
        const Value& v = I_.edge_values(ei)[x];
        if (g.nodes()[tgt].kind == NodeKind::Type) {
          vars_[vx].attributes.push_back(ei);
        } else {
          std::size_t vy = var_of[tgt][std::get<Element>(v).index];
          vars_[std::max(vx, vy)].naturality.push_back({ei, vx, vy});
        }
      }
    }
    if (injective_) used_.resize(g.nodes().size());
    for (std::size_t n = 0; injective_ && n < used_.size(); ++n) used_[n].assign(J_.carrier(n).size(), false);
  }

  // Calls visit for every hom; stops early when visit returns false.
  void run(const std::function<bool(const std::vector<std::vector<std::size_t>>&)>& visit) {
    visit_ = &visit;
    stopped_ = false;
    assign(0);
  }

 private:
  struct NaturalityCheck {
    std::size_t edge, x, y;
  };
  struct Var {
    std::size_t node, element;
    std::vector<std::size_t> attributes;
    std::vector<NaturalityCheck> naturality;
  };

  bool consistent(const Var& v) const {
    for (std::size_t edge : v.attributes) {
      if (I_.edge_values(edge)[v.element] != J_.edge_values(edge)[components_[v.node][v.element]]) return false;
    }
    for (const auto& c : v.naturality) {
      const Var& x = vars_[c.x];
      const Var& y = vars_[c.y];
      const Value& jhx = J_.edge_values(c.edge)[components_[x.node][x.element]];
      if (std::get<Element>(jhx).index != components_[y.node][y.element]) return false;
    }
    return true;
  }

  void assign(std::size_t k) {
    if (stopped_) return;
    if (k == vars_.size()) {
      if (!(*visit_)(components_)) stopped_ = true;
      return;
    }
    const Var& v = vars_[k];
    const std::size_t choices = J_.carrier(v.node).size();
    for (std::size_t y = 0; y < choices && !stopped_; ++y) {
      if (injective_ && used_[v.node][y]) continue;
      components_[v.node][v.element] = y;
      if (!consistent(v)) continue;
      if (injective_) used_[v.node][y] = true;
      assign(k + 1);
      if (injective_) used_[v.node][y] = false;
    }
  }

  const Instance& I_;
  const Instance& J_;
  bool injective_;
  std::vector<Var> vars_;
  std::vector<std::vector<std::size_t>> components_;
  std::vector<std::vector<bool>> used_;
  const std::function<bool(const std::vector<std::vector<std::size_t>>&)>* visit_ = nullptr;
  bool stopped_ = false;
};

void require_same_schema(const Instance& a, const Instance& b) {
  if (!same_schema(*a.schema(), *b.schema())) {
    throw Error(ErrorCode::SchemaMismatch, "instances are on different schemas (" + a.schema()->name() +
                                               ", " + b.schema()->name() + ")");
  }
}

}  // namespace

HomEnumeration enumerate_homs(const InstancePtr& from, const InstancePtr& to, std::size_t cap) {
  require_same_schema(*from, *to);
  HomEnumeration out;
  HomSearch search(*from, *to, false);
  search.run([&](const std::vector<std::vector<std::size_t>>& comps) {
    if (out.homs.size() == cap) {
      out.completeness = HomCompleteness::Capped;
      return false;
    }
    out.homs.push_back({from, to, comps});
    return true;
  });
  return out;
}

HomCount count_homs(const InstancePtr& from, const InstancePtr& to, std::size_t cap) {
  require_same_schema(*from, *to);
  HomCount out;
  HomSearch search(*from, *to, false);
  search.run([&](const std::vector<std::vector<std::size_t>>&) {
    if (out.count == cap) {
      out.completeness = HomCompleteness::Capped;
      return false;
    }
    ++out.count;
    return true;
  });
  return out;
}

std::optional<InstanceMorphism> iso_check(const InstancePtr& from, const InstancePtr& to) {
  require_same_schema(*from, *to);
  const Graph& g = from->schema()->graph();
  for (std::size_t n = 0; n < g.nodes().size(); ++n) {
    if (from->carrier(n).size() != to->carrier(n).size()) return std::nullopt;
  }
  std::optional<InstanceMorphism> found;
  HomSearch search(*from, *to, true);
  search.run([&](const std::vector<std::vector<std::size_t>>& comps) {
    found = InstanceMorphism{from, to, comps};
    return false;
  });
  return found;
}

}  // namespace catmig
