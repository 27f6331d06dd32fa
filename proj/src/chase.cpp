#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "catmig/error.hpp"
#include "catmig/migrate.hpp"

namespace catmig {

namespace {

// Working state of the sigma chase: elements (input generators, literal
// constants and labeled nulls), a union-find over them, and partial edge
// functions kept on class representatives. Merging two classes merges their
// edge images, which keeps the relation a congruence.
class ChaseState {
 public:
  ChaseState(const Schema& target, std::size_t max_elements)
      : schema_(target), graph_(target.graph()), max_elements_(max_elements) {
    slot_.resize(graph_.edges().size());
    for (const Node& n : graph_.nodes()) {
      const auto& out = graph_.out_edges(n.name);
      for (std::size_t s = 0; s < out.size(); ++s) slot_[out[s]] = s;
    }
  }

  std::size_t add_generator(std::size_t node, std::string name) {
    std::size_t id = create(node);
    elems_[id].original = std::move(name);
    return id;
  }

  std::size_t literal(std::size_t node, const Literal& value) {
    auto key = std::make_pair(node, value);
    auto it = literals_.find(key);
    if (it != literals_.end()) return it->second;
    std::size_t id = create(node);
    literal_[id] = value;
    literals_.emplace(std::move(key), id);
    return id;
  }

  std::size_t make_null(std::size_t node) {
    std::size_t id = create(node);
    elems_[id].null_number = next_null_++;
    changed_ = true;
    return id;
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  std::optional<std::size_t> image(std::size_t x, std::size_t edge) {
    const auto& img = images_[find(x)][slot_[edge]];
    if (!img) return std::nullopt;
    return find(*img);
  }

  // Sets edge(x) = y, merging with any existing image.
  void define(std::size_t x, std::size_t edge, std::size_t y) {
    auto& img = images_[find(x)][slot_[edge]];
    if (img) {
      merge(*img, y);
    } else {
      img = y;
      changed_ = true;
    }
  }

  void merge(std::size_t a, std::size_t b) {
    pending_.emplace_back(a, b);
    while (!pending_.empty()) {
      auto [x, y] = pending_.front();
      pending_.pop_front();
      std::size_t rx = find(x), ry = find(y);
      if (rx == ry) continue;
      if (rx > ry) std::swap(rx, ry);
      changed_ = true;
      parent_[ry] = rx;
      if (literal_[rx] && literal_[ry] && *literal_[rx] != *literal_[ry]) {
        throw Error(ErrorCode::LiteralCollision,
                    "the chase identifies " + render_literal(*literal_[rx]) + " with " +
                        render_literal(*literal_[ry]) + " at " + graph_.nodes()[elems_[rx].node].name);
      }
      if (!literal_[rx]) literal_[rx] = literal_[ry];
      auto& keep = images_[rx];
      auto& gone = images_[ry];
      for (std::size_t s = 0; s < keep.size(); ++s) {
        if (keep[s] && gone[s]) {
          pending_.emplace_back(*keep[s], *gone[s]);
        } else if (gone[s]) {
          keep[s] = gone[s];
        }
      }
      gone.clear();
    }
  }

  // Walks `edges` from x, creating nulls for missing intermediate images,
  // and identifies the endpoint with `target`.
  void enforce(std::size_t x, const Path& path, std::size_t target) {
    if (path.is_identity()) {
      merge(x, target);
      return;
    }
    std::size_t cur = find(x);
    const auto& edges = path.edges();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      std::size_t e = *graph_.find_edge(edges[i]);
      auto img = image(cur, e);
      if (!img) {
        std::size_t fresh = make_null(*graph_.find_node(graph_.edges()[e].target));
        define(cur, e, fresh);
        img = fresh;
      }
      cur = find(*img);
    }
    define(cur, *graph_.find_edge(edges.back()), target);
  }

  std::optional<std::size_t> eval(std::size_t x, const Path& path) {
    std::size_t cur = find(x);
    for (const auto& name : path.edges()) {
      auto img = image(cur, *graph_.find_edge(name));
      if (!img) return std::nullopt;
      cur = *img;
    }
    return cur;
  }

  // One layer of missing images for every current representative.
  void totality() {
    const std::size_t n = elems_.size();
    for (std::size_t x = 0; x < n; ++x) {
      if (find(x) != x) continue;
      const Node& node = graph_.nodes()[elems_[x].node];
      const auto& out = graph_.out_edges(node.name);
      for (std::size_t s = 0; s < out.size(); ++s) {
        if (images_[x][s]) continue;
        std::size_t fresh = make_null(*graph_.find_node(graph_.edges()[out[s]].target));
        images_[x][s] = fresh;
      }
    }
  }

  void equations() {
    const std::size_t n = elems_.size();
    for (const PathEquation& eq : schema_.equations()) {
      const std::size_t start = *graph_.find_node(eq.lhs.start());
      for (std::size_t x = 0; x < n; ++x) {
        if (find(x) != x || elems_[x].node != start) continue;
        auto l = eval(x, eq.lhs);
        auto r = eval(x, eq.rhs);
        if (l && r && *l != *r) merge(*l, *r);
      }
    }
  }

  bool take_changed() {
    bool c = changed_;
    changed_ = false;
    return c;
  }

  std::size_t size() const { return elems_.size(); }

  SigmaResult finish(const SchemaPtr& target, std::size_t rounds) {
    const std::size_t n = elems_.size();
    // Canonical names per class.
    std::vector<std::optional<std::string>> best_original(n);
    std::vector<std::optional<std::size_t>> best_null(n);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t r = find(x);
      if (elems_[x].original && (!best_original[r] || *elems_[x].original < *best_original[r])) {
        best_original[r] = elems_[x].original;
      }
      if (elems_[x].null_number && (!best_null[r] || *elems_[x].null_number < *best_null[r])) {
        best_null[r] = elems_[x].null_number;
      }
    }
    std::vector<std::vector<std::string>> carriers(graph_.nodes().size());
    std::vector<std::size_t> position(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (find(x) != x) continue;
      const Node& node = graph_.nodes()[elems_[x].node];
      if (node.kind == NodeKind::Type) {
        if (!literal_[x]) {
          throw Error(ErrorCode::SigmaUnconstrainedAttribute,
                      "labeled null !" + std::to_string(*best_null[x]) + " at " + node.name +
                          " is never identified with a literal");
        }
        continue;
      }
      auto& carrier = carriers[elems_[x].node];
      position[x] = carrier.size();
      carrier.push_back(best_original[x] ? *best_original[x] : "!" + std::to_string(*best_null[x]));
    }
    std::vector<std::vector<Value>> values(graph_.edges().size());
    for (std::size_t x = 0; x < n; ++x) {
      if (find(x) != x || graph_.nodes()[elems_[x].node].kind == NodeKind::Type) continue;
      const auto& out = graph_.out_edges(graph_.nodes()[elems_[x].node].name);
      for (std::size_t s = 0; s < out.size(); ++s) {
        std::size_t y = find(*images_[x][s]);
        if (graph_.nodes()[elems_[y].node].kind == NodeKind::Type) {
          values[out[s]].push_back(*literal_[y]);
        } else {
          values[out[s]].push_back(Element{position[y]});
        }
      }
    }
    SigmaResult result{Instance::from_parts(target, std::move(carriers), std::move(values)), {}, rounds};
    for (const auto& [gen, entry] : generators) {
      std::size_t r = find(gen);
      ProvenanceEntry p = entry;
      p.output = result.instance.carrier(elems_[r].node)[position[r]];
      result.provenance.push_back(std::move(p));
    }
    return result;
  }

  std::vector<std::pair<std::size_t, ProvenanceEntry>> generators;

 private:
  struct ChaseElement {
    std::size_t node = 0;
    std::optional<std::string> original;
    std::optional<std::size_t> null_number;
  };

  std::size_t create(std::size_t node) {
    if (elems_.size() >= max_elements_) {
      throw Error(ErrorCode::SigmaDivergence,
                  "chase exceeded the element limit of " + std::to_string(max_elements_));
    }
    std::size_t id = elems_.size();
    elems_.push_back({node, std::nullopt, std::nullopt});
    parent_.push_back(id);
    literal_.emplace_back();
    images_.emplace_back(graph_.out_edges(graph_.nodes()[node].name).size());
    return id;
  }

  const Schema& schema_;
  const Graph& graph_;
  std::size_t max_elements_;
  std::vector<std::size_t> slot_;
  std::vector<ChaseElement> elems_;
  std::vector<std::size_t> parent_;
  std::vector<std::optional<Literal>> literal_;
  std::vector<std::vector<std::optional<std::size_t>>> images_;
  std::map<std::pair<std::size_t, Literal>, std::size_t> literals_;
  std::deque<std::pair<std::size_t, std::size_t>> pending_;
  std::size_t next_null_ = 0;
  bool changed_ = false;
};

}  // namespace

SigmaResult sigma(const CheckedMapping& F, const Instance& I, const MigrationLimits& limits) {
  limits.validate();
  const Mapping& m = F.mapping();
  if (!same_schema(*I.schema(), *m.source())) {
    throw Error(ErrorCode::SchemaMismatch, "sigma expects an instance on " + m.source()->name());
  }
  const Schema& c = *m.source();
  const Schema& d = *m.target();
  const Graph& cg = c.graph();
  ChaseState state(d, limits.max_elements);

  // Generator names: the input id, qualified with its node when two source
  // nodes landing on the same target node share an id.
  std::map<std::pair<std::string, std::string>, std::size_t> uses;
  for (const auto& node : c.entities()) {
    for (const auto& id : I.carrier(node)) ++uses[{m.node_image(node), id}];
  }
  std::vector<std::vector<std::size_t>> gen(cg.nodes().size());
  for (const auto& node : c.entities()) {
    const std::string& image = m.node_image(node);
    for (const auto& id : I.carrier(node)) {
      std::string name = uses[{image, id}] > 1 ? id + "@" + node : id;
      std::size_t g = state.add_generator(d.node_index(image), name);
      gen[c.node_index(node)].push_back(g);
      state.generators.push_back({g, {node, id, ""}});
    }
  }
  for (std::size_t ei = 0; ei < cg.edges().size(); ++ei) {
    const Edge& e = cg.edges()[ei];
    const std::size_t src = c.node_index(e.source);
    const Path& image = m.edge_image(e.name);
    for (std::size_t x = 0; x < gen[src].size(); ++x) {
      const Value& v = I.edge_values(ei)[x];
      std::size_t target;
      if (const auto* el = std::get_if<Element>(&v)) {
        target = gen[c.node_index(e.target)][el->index];
      } else {
        target = state.literal(d.node_index(m.node_image(e.target)), std::get<Literal>(v));
      }
      state.enforce(gen[src][x], image, target);
    }
  }

  state.take_changed();
  for (std::size_t round = 1; round <= limits.max_chase_rounds; ++round) {
    state.totality();
    state.equations();
    if (!state.take_changed()) return state.finish(m.target(), round);
  }
  throw Error(ErrorCode::SigmaDivergence,
              "chase did not reach a fixpoint within " + std::to_string(limits.max_chase_rounds) +
                  " rounds (" + std::to_string(state.size()) + " elements)");
}

}  // namespace catmig
