#include "catmig/frontend/triples.hpp"

namespace catmig::frontend {

std::vector<Triple> export_triples(const Instance& instance) {
  const Schema& s = *instance.schema();
  const Graph& g = s.graph();
  std::vector<Triple> out;
  for (const auto& node : s.entities()) {
    const auto& carrier = instance.carrier(node);
    for (std::size_t x = 0; x < carrier.size(); ++x) {
      for (std::size_t ei : g.out_edges(node)) {
        const Edge& e = g.edges()[ei];
        const Value& v = instance.edge_values(ei)[x];
        std::string text = std::holds_alternative<Element>(v)
                               ? instance.carrier(e.target)[std::get<Element>(v).index]
                               : render_literal(std::get<Literal>(v));
        out.push_back({carrier[x], e.name, v, std::move(text)});
      }
    }
  }
  return out;
}

std::string render_triples(const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& t : triples) out += t.subject + "\t" + t.edge + "\t" + t.object_text + "\n";
  return out;
}

}  // namespace catmig::frontend
