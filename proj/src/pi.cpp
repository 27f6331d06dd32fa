#include <map>
#include <optional>

#include "catmig/error.hpp"
#include "catmig/migrate.hpp"

namespace catmig {

namespace {

// Objects (c, g: d -> F(c)) of the comma category at one target node, and
// the compatibility constraints induced by the source edges.
struct CommaCategory {
  struct Object {
    std::size_t node;  // source node index
    Path path;         // normal form d -> F(node)
    bool is_type;
  };
  struct Constraint {
    std::size_t edge;  // source edge index
    std::size_t from;  // object index (entity)
    std::size_t to;    // object index
  };

  std::vector<Object> objects;
  std::map<std::pair<std::size_t, std::vector<std::string>>, std::size_t> index;
  std::vector<Constraint> constraints;

  std::optional<std::size_t> find(std::size_t node, const Path& p) const {
    auto it = index.find({node, p.edges()});
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

CommaCategory build_comma(const Mapping& m, const std::string& d, const Budget& budget) {
  const Schema& c = *m.source();
  const Graph& cg = c.graph();
  const Theory& dt = m.target()->theory();
  CommaCategory cc;
  for (std::size_t n = 0; n < cg.nodes().size(); ++n) {
    const Node& node = cg.nodes()[n];
    PathEnumeration paths = enumerate_paths(dt, d, m.node_image(node.name), budget);
    if (paths.completeness == Completeness::Truncated) {
      throw Error(ErrorCode::PiInfinite, "normal-form paths out of " + d + " are not exhausted within length " +
                                             std::to_string(budget.max_path_length));
    }
    for (Path& p : paths.paths) {
      cc.index.emplace(std::make_pair(n, p.edges()), cc.objects.size());
      cc.objects.push_back({n, std::move(p), node.kind == NodeKind::Type});
    }
  }
  for (std::size_t k = 0; k < cc.objects.size(); ++k) {
    const auto& obj = cc.objects[k];
    if (obj.is_type) continue;
    for (std::size_t ei : cg.out_edges(cg.nodes()[obj.node].name)) {
      const Edge& e = cg.edges()[ei];
      Path moved = normalize(compose(dt.graph(), obj.path, m.edge_image(e.name)), dt, budget);
      auto to = cc.find(c.node_index(e.target), moved);
      if (!to) {
        throw Error(ErrorCode::PiInfinite, "comma object " + moved.to_string() + " at " + d +
                                               " lies beyond the path bound");
      }
      cc.constraints.push_back({ei, k, *to});
    }
  }
  return cc;
}

struct Family {
  std::vector<std::size_t> choice;         // per object; entity objects only
  std::vector<std::optional<Literal>> lit; // per object; type objects only
};

// Enumerates compatible families by backtracking over entity objects in
// order. Type objects receive the literal their constraints force.
class FamilySearch {
 public:
  FamilySearch(const CommaCategory& cc, const Instance& I, std::size_t limit, const std::string& d)
      : cc_(cc), I_(I), limit_(limit), d_(d) {
    const std::size_t n = cc.objects.size();
    checks_.resize(n);
    literal_sources_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!cc.objects[k].is_type) entity_order_.push_back(k);
    }
    for (std::size_t i = 0; i < cc.constraints.size(); ++i) {
      const auto& con = cc.constraints[i];
      if (cc.objects[con.to].is_type) {
        checks_[con.from].push_back(i);
        literal_sources_[con.to].push_back(i);
      } else {
        checks_[std::max(con.from, con.to)].push_back(i);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (cc.objects[k].is_type && literal_sources_[k].empty()) unconstrained_.push_back(k);
    }
    current_.choice.assign(n, 0);
    current_.lit.assign(n, std::nullopt);
  }

  std::vector<Family> run() {
    assign(0);
    if (!families_.empty() && !unconstrained_.empty()) {
      const auto& obj = cc_.objects[unconstrained_.front()];
      throw Error(ErrorCode::PiUnconstrainedAttribute,
                  "nothing determines the value at comma object (" +
                      I_.schema()->graph().nodes()[obj.node].name + ", " + obj.path.to_string() +
                      ") over " + d_);
    }
    return std::move(families_);
  }

 private:
  Value value_at(std::size_t edge, std::size_t object) const {
    return I_.edge_values(edge)[current_.choice[object]];
  }

  void assign(std::size_t pos) {
    if (pos == entity_order_.size()) {
      if (families_.size() >= limit_) {
        throw Error(ErrorCode::ElementLimitExceeded,
                    "pi produces more than " + std::to_string(limit_) + " elements");
      }
      families_.push_back(current_);
      return;
    }
    const std::size_t k = entity_order_[pos];
    const auto& carrier = I_.carrier(cc_.objects[k].node);
    for (std::size_t x = 0; x < carrier.size(); ++x) {
      current_.choice[k] = x;
      std::vector<std::size_t> set_here;
      bool ok = true;
      for (std::size_t i : checks_[k]) {
        const auto& con = cc_.constraints[i];
        Value v = value_at(con.edge, con.from);
        if (cc_.objects[con.to].is_type) {
          const Literal& lit = std::get<Literal>(v);
          auto& slot = current_.lit[con.to];
          if (!slot) {
            slot = lit;
            set_here.push_back(con.to);
          } else if (*slot != lit) {
            ok = false;
            break;
          }
        } else if (std::get<Element>(v).index != current_.choice[con.to]) {
          ok = false;
          break;
        }
      }
      if (ok) assign(pos + 1);
      for (std::size_t t : set_here) current_.lit[t].reset();
    }
  }

  const CommaCategory& cc_;
  const Instance& I_;
  std::size_t limit_;
  const std::string& d_;
  std::vector<std::size_t> entity_order_;
  std::vector<std::vector<std::size_t>> checks_;
  std::vector<std::vector<std::size_t>> literal_sources_;
  std::vector<std::size_t> unconstrained_;
  Family current_;
  std::vector<Family> families_;
};

}  // namespace

Instance pi(const CheckedMapping& F, const Instance& I, const MigrationLimits& limits) {
  limits.validate();
  const Mapping& m = F.mapping();
  if (!same_schema(*I.schema(), *m.source())) {
    throw Error(ErrorCode::SchemaMismatch, "pi expects an instance on " + m.source()->name());
  }
  const Schema& d = *m.target();
  const Graph& dg = d.graph();
  if (!d.theory().is_convergent()) {
    throw Error(ErrorCode::NonConvergentTheory,
                "pi needs canonical normal forms, but the theory of " + d.name() + " is only partially completed");
  }
  Budget budget = limits.prover;
  budget.max_path_length = limits.comma_path_bound;

  std::vector<CommaCategory> commas(dg.nodes().size());
  std::vector<std::vector<Family>> families(dg.nodes().size());
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> lookup(dg.nodes().size());
  std::size_t total = 0;
  for (const auto& node : d.entities()) {
    const std::size_t n = d.node_index(node);
    commas[n] = build_comma(m, node, budget);
    families[n] = FamilySearch(commas[n], I, limits.max_elements - total, node).run();
    total += families[n].size();
    for (std::size_t k = 0; k < families[n].size(); ++k) lookup[n].emplace(families[n][k].choice, k);
  }

  std::vector<std::vector<std::string>> carriers(dg.nodes().size());
  for (const auto& node : d.entities()) {
    const std::size_t n = d.node_index(node);
    for (std::size_t k = 0; k < families[n].size(); ++k) carriers[n].push_back(node + "_" + std::to_string(k));
  }

  const Graph& cg = m.source()->graph();
  std::vector<std::vector<Value>> values(dg.edges().size());
  for (std::size_t fi = 0; fi < dg.edges().size(); ++fi) {
    const Edge& f = dg.edges()[fi];
    const std::size_t src = d.node_index(f.source);
    const std::size_t tgt = d.node_index(f.target);
    const CommaCategory& from = commas[src];
    if (dg.nodes()[tgt].kind == NodeKind::Type) {
      std::optional<std::size_t> obj;
      if (auto cn = cg.find_node(f.target)) obj = from.find(*cn, normalize(Path(f.source, {f.name}), d.theory(), budget));
      if (!obj && !families[src].empty()) {
        throw Error(ErrorCode::PiUnconstrainedAttribute,
                    "attribute " + f.name + " has no counterpart in " + m.source()->name());
      }
      for (const Family& fam : families[src]) values[fi].push_back(*fam.lit[*obj]);
      continue;
    }
    // Reindex along f: the family at the target reads the source family at
    // nf(f . g) for each of its objects (c, g).
    const CommaCategory& to = commas[tgt];
    std::vector<std::size_t> pull(to.objects.size(), 0);
    for (std::size_t k = 0; k < to.objects.size(); ++k) {
      const auto& obj = to.objects[k];
      Path moved = normalize(compose(dg, Path(f.source, {f.name}), obj.path), d.theory(), budget);
      auto at = from.find(obj.node, moved);
      if (!at) throw Error(ErrorCode::PiInfinite, "reindexing along " + f.name + " leaves the path bound");
      pull[k] = *at;
    }
    for (const Family& fam : families[src]) {
      std::vector<std::size_t> key(to.objects.size(), 0);
      for (std::size_t k = 0; k < to.objects.size(); ++k) {
        if (!to.objects[k].is_type) key[k] = fam.choice[pull[k]];
      }
      auto it = lookup[tgt].find(key);
      if (it == lookup[tgt].end()) {
        throw Error(ErrorCode::PiInfinite, "reindexed family along " + f.name + " is not compatible");
      }
      values[fi].push_back(Element{it->second});
    }
  }
  return Instance::from_parts(m.target(), std::move(carriers), std::move(values));
}

}  // namespace catmig
