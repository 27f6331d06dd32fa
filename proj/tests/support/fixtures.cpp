#include "fixtures.hpp"

#include <algorithm>
#include <map>

#include "catmig/error.hpp"

namespace catmig::testing {

namespace {

EdgeMapDecl edge_map(std::string edge, std::vector<std::pair<std::string, RawValue>> entries) {
  EdgeMapDecl m{std::move(edge), {}};
  for (auto& [x, v] : entries) m.entries.push_back({x, v});
  return m;
}

RawValue b(std::string s) { return RawValue::bare(std::move(s)); }
RawValue q(std::string s) { return RawValue::quoted(std::move(s)); }

InstanceDecl paper_tables(std::vector<std::pair<std::string, RawValue>> admin) {
  InstanceDecl d;
  d.schema = "EmpDept";
  d.carriers = {{"Emp", {"101", "102", "103"}}, {"Dept", {"q10", "x02"}}};
  d.edges = {
      edge_map("mgr", {{"101", b("103")}, {"102", b("102")}, {"103", b("103")}}),
      edge_map("works", {{"101", b("q10")}, {"102", b("x02")}, {"103", b("q10")}}),
      edge_map("admin", std::move(admin)),
      edge_map("name", {{"101", q("Al")}, {"102", q("Bob")}, {"103", q("Carl")}}),
      edge_map("dname", {{"q10", q("CS")}, {"x02", q("Math")}}),
  };
  return d;
}

}  // namespace

SchemaDecl emp_dept_decl() {
  SchemaDecl d;
  d.name = "EmpDept";
  d.entities = {"Emp", "Dept"};
  d.types = {"String"};
  d.edges = {{"mgr", "Emp", "Emp"},
             {"works", "Emp", "Dept"},
             {"admin", "Dept", "Emp"},
             {"name", "Emp", "String"},
             {"dname", "Dept", "String"}};
  d.equations = {{RawPath::of({"admin", "works"}), RawPath::identity("Dept")}};
  return d;
}

SchemaPtr emp_dept() { return validate_schema(emp_dept_decl()); }

InstanceDecl paper_verbatim_decl() {
  InstanceDecl d = paper_tables({{"q10", b("102")}, {"x02", b("101")}});
  d.name = "PaperVerbatim";
  return d;
}

InstanceDecl paper_corrected_decl() {
  InstanceDecl d = paper_tables({{"q10", b("101")}, {"x02", b("102")}});
  d.name = "PaperCorrected";
  return d;
}

SchemaPtr loop_schema(const std::string& node, const std::string& edge, bool idempotent) {
  SchemaDecl d;
  d.name = node + "Loop";
  d.entities = {node};
  d.edges = {{edge, node, node}};
  if (idempotent) d.equations = {{RawPath::of({edge, edge}), RawPath::of({edge})}};
  return validate_schema(d);
}

namespace {

std::size_t uniform(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
  return v[uniform(rng, 0, v.size() - 1)];
}

}  // namespace

SchemaPtr random_schema(std::mt19937& rng, const RandomSchemaOptions& o) {
  for (;;) {
    SchemaDecl d;
    d.name = o.prefix;
    const std::size_t k = uniform(rng, 1, o.max_entities);
    for (std::size_t i = 0; i < k; ++i) d.entities.push_back(o.prefix + "N" + std::to_string(i));
    const bool strings = o.attributes && coin(rng, 0.5);
    if (strings) d.types.push_back("String");

    std::size_t counter = 0;
    auto fresh = [&](const char* stem) { return o.prefix + stem + std::to_string(counter++); };
    if (k >= 2) {
      const std::size_t m = uniform(rng, 0, o.max_edges);
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t a = uniform(rng, 0, k - 2);
        std::size_t c = uniform(rng, a + 1, k - 1);
        d.edges.push_back({fresh("e"), d.entities[a], d.entities[c]});
      }
    }
    if (o.loops && coin(rng, 0.35)) {
      const std::string& n = pick(rng, d.entities);
      std::string l = fresh("l");
      d.edges.push_back({l, n, n});
      if (coin(rng, 0.6)) {
        d.equations.push_back({RawPath::of({l, l}), RawPath::of({l})});
      } else {
        d.equations.push_back({RawPath::of({l, l}), RawPath::identity(n)});
      }
    }
    if (strings) {
      for (const auto& n : d.entities) {
        if (coin(rng, 0.5)) d.edges.push_back({fresh("a"), n, "String"});
      }
    }
    SchemaPtr plain;
    try {
      plain = validate_schema(d);
    } catch (const Error&) {
      continue;
    }
    if (o.equations && coin(rng, 0.6)) {
      // Equate two distinct short paths with shared endpoints.
      std::vector<PathEquation> candidates;
      for (const Node& a : plain->graph().nodes()) {
        if (a.kind != NodeKind::Entity) continue;
        for (const Node& c : plain->graph().nodes()) {
          Budget bb;
          bb.max_path_length = 2;
          auto hs = hom_set(*plain, a.name, c.name, bb);
          for (std::size_t i = 0; i < hs.paths.size(); ++i) {
            for (std::size_t j = i + 1; j < hs.paths.size(); ++j) {
              candidates.push_back({hs.paths[i], hs.paths[j]});
            }
          }
        }
      }
      if (!candidates.empty()) {
        const auto& eq = pick(rng, candidates);
        d.equations.push_back({to_raw(eq.lhs), to_raw(eq.rhs)});
      }
    }
    SchemaPtr s = validate_schema(d);
    if (s->theory().is_convergent()) return s;
  }
}

std::optional<Mapping> random_mapping(const SchemaPtr& source, const SchemaPtr& target, std::mt19937& rng,
                                      int attempts) {
  const Schema& c = *source;
  const Schema& d = *target;
  if (d.entities().empty()) return std::nullopt;
  for (const auto& t : c.types()) {
    if (!d.is_type(t)) return std::nullopt;
  }
  Budget short_paths;
  short_paths.max_path_length = 2;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    MappingDecl m{"F", c.name(), d.name(), {}, {}};
    std::map<std::string, std::string> image;
    for (const auto& n : c.entities()) {
      image[n] = pick(rng, d.entities());
      m.nodes.push_back({n, image[n]});
    }
    for (const auto& t : c.types()) image[t] = t;
    bool ok = true;
    for (const Edge& e : c.graph().edges()) {
      auto hs = hom_set(d, image[e.source], image[e.target], short_paths);
      if (hs.paths.empty()) {
        ok = false;
        break;
      }
      m.edges.push_back({e.name, to_raw(pick(rng, hs.paths))});
    }
    if (!ok) continue;
    Mapping mapping = validate_mapping(source, target, m);
    if (check_functoriality(mapping).kind == FunctorialityKind::Functorial) return mapping;
  }
  return std::nullopt;
}

std::optional<Instance> random_instance(const SchemaPtr& schema, std::mt19937& rng, std::size_t max_per_node,
                                        int attempts) {
  const Schema& s = *schema;
  const Graph& g = s.graph();
  static const std::vector<std::string> pool{"p", "q"};
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<std::vector<std::string>> carriers(g.nodes().size());
    for (const auto& n : s.entities()) {
      std::size_t size = uniform(rng, 0, max_per_node);
      for (std::size_t i = 0; i < size; ++i) carriers[s.node_index(n)].push_back(n + "_" + std::to_string(i));
    }
    std::vector<std::vector<Value>> values(g.edges().size());
    bool ok = true;
    for (std::size_t ei = 0; ei < g.edges().size() && ok; ++ei) {
      const Edge& e = g.edges()[ei];
      const auto& src = carriers[s.node_index(e.source)];
      const auto& tgt = carriers[s.node_index(e.target)];
      for (std::size_t x = 0; x < src.size(); ++x) {
        if (s.is_type(e.target)) {
          values[ei].push_back(Literal{pick(rng, pool)});
        } else if (tgt.empty()) {
          ok = false;
          break;
        } else {
          values[ei].push_back(Element{uniform(rng, 0, tgt.size() - 1)});
        }
      }
    }
    if (!ok) continue;
    Instance inst = Instance::from_parts(schema, std::move(carriers), std::move(values));
    if (check_constraints(inst).empty()) return inst;
  }
  return std::nullopt;
}

Instance renamed_reversed(const Instance& instance, const std::string& prefix) {
  const Schema& s = *instance.schema();
  const Graph& g = s.graph();
  std::vector<std::vector<std::string>> carriers(g.nodes().size());
  for (std::size_t n = 0; n < g.nodes().size(); ++n) {
    const auto& c = instance.carrier(n);
    for (auto it = c.rbegin(); it != c.rend(); ++it) carriers[n].push_back(prefix + *it);
  }
  std::vector<std::vector<Value>> values(g.edges().size());
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const Edge& e = g.edges()[ei];
    const std::size_t src_size = instance.carrier(s.node_index(e.source)).size();
    const std::size_t tgt_size = instance.carrier(s.node_index(e.target)).size();
    for (std::size_t x = src_size; x-- > 0;) {
      Value v = instance.edge_values(ei)[x];
      if (auto* el = std::get_if<Element>(&v)) el->index = tgt_size - 1 - el->index;
      values[ei].push_back(v);
    }
  }
  return Instance::from_parts(instance.schema(), std::move(carriers), std::move(values));
}

std::optional<std::size_t> brute_force_hom_count(const InstancePtr& from, const InstancePtr& to,
                                                 std::size_t max_candidates) {
  const Schema& s = *from->schema();
  const std::size_t nodes = s.graph().nodes().size();
  // One digit per source element, base |target carrier|.
  std::vector<std::pair<std::size_t, std::size_t>> digits;  // (node, element)
  double candidates = 1;
  for (const auto& n : s.entities()) {
    std::size_t idx = s.node_index(n);
    for (std::size_t x = 0; x < from->carrier(idx).size(); ++x) {
      digits.emplace_back(idx, x);
      candidates *= static_cast<double>(to->carrier(idx).size());
    }
  }
  if (candidates > static_cast<double>(max_candidates)) return std::nullopt;
  for (const auto& [n, x] : digits) {
    if (to->carrier(n).empty()) return 0;
  }
  InstanceMorphism h{from, to, std::vector<std::vector<std::size_t>>(nodes)};
  for (std::size_t n = 0; n < nodes; ++n) h.components[n].assign(from->carrier(n).size(), 0);
  std::size_t count = 0;
  for (;;) {
    if (check_hom(h).empty()) ++count;
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      auto [n, x] = digits[i];
      if (++h.components[n][x] < to->carrier(n).size()) break;
      h.components[n][x] = 0;
    }
    if (i == digits.size()) break;
  }
  return count;
}

MigrationLimits small_limits() {
  MigrationLimits l;
  l.max_chase_rounds = 200;
  l.max_elements = 5000;
  l.comma_path_bound = 6;
  return l;
}

}  // namespace catmig::testing
