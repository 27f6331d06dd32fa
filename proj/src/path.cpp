#include "catmig/path.hpp"

#include <algorithm>

#include "catmig/error.hpp"

namespace catmig {

std::string Path::to_string() const {
  if (edges_.empty()) return "id:" + start_;
  std::string out = edges_.front();
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    out += '.';
    out += edges_[i];
  }
  return out;
}

bool path_less(const Path& a, const Path& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  if (a.edges() != b.edges()) return a.edges() < b.edges();
  return a.start() < b.start();
}

bool Graph::add_node(Node node) {
  if (node_index_.count(node.name)) return false;
  node_index_.emplace(node.name, nodes_.size());
  out_edges_[node.name];
  nodes_.push_back(std::move(node));
  return true;
}

bool Graph::add_edge(Edge edge) {
  if (edge_index_.count(edge.name)) return false;
  edge_index_.emplace(edge.name, edges_.size());
  out_edges_[edge.source].push_back(edges_.size());
  edges_.push_back(std::move(edge));
  return true;
}

std::optional<std::size_t> Graph::find_node(const std::string& name) const {
  auto it = node_index_.find(name);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Graph::find_edge(const std::string& name) const {
  auto it = edge_index_.find(name);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

const Node& Graph::node(const std::string& name) const {
  auto idx = find_node(name);
  if (!idx) throw Error(ErrorCode::UnknownNode, "unknown node '" + name + "'");
  return nodes_[*idx];
}

const Edge& Graph::edge(const std::string& name) const {
  auto idx = find_edge(name);
  if (!idx) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + name + "'");
  return edges_[*idx];
}

const std::vector<std::size_t>& Graph::out_edges(const std::string& node) const {
  static const std::vector<std::size_t> kNone;
  auto it = out_edges_.find(node);
  return it == out_edges_.end() ? kNone : it->second;
}

void Graph::check(const Path& p) const {
  std::string at = node(p.start()).name;
  for (const auto& name : p.edges()) {
    const Edge& e = edge(name);
    if (e.source != at) {
      throw Error(ErrorCode::EndpointMismatch, "edge '" + name + "' starts at " + e.source +
                                                   " but the path '" + p.to_string() +
                                                   "' is at " + at);
    }
    at = e.target;
  }
}

bool Graph::is_well_typed(const Path& p) const {
  if (!find_node(p.start())) return false;
  std::string_view at = p.start();
  for (const auto& name : p.edges()) {
    auto idx = find_edge(name);
    if (!idx || edges_[*idx].source != at) return false;
    at = edges_[*idx].target;
  }
  return true;
}

const std::string& Graph::end_of(const Path& p) const {
  if (p.is_identity()) return node(p.start()).name;
  return edge(p.edges().back()).target;
}

Path compose(const Graph& graph, const Path& p, const Path& q) {
  const std::string& mid = graph.end_of(p);
  if (mid != q.start()) {
    throw Error(ErrorCode::EndpointMismatch, "cannot compose " + p.to_string() + " (ends at " +
                                                 mid + ") with " + q.to_string() +
                                                 " (starts at " + q.start() + ")");
  }
  std::vector<std::string> edges = p.edges();
  edges.insert(edges.end(), q.edges().begin(), q.edges().end());
  return Path(p.start(), std::move(edges));
}

void check_equation(const Graph& graph, const PathEquation& eq) {
  graph.check(eq.lhs);
  graph.check(eq.rhs);
  const std::string& lend = graph.end_of(eq.lhs);
  const std::string& rend = graph.end_of(eq.rhs);
  if (eq.lhs.start() != eq.rhs.start() || lend != rend) {
    throw Error(ErrorCode::EndpointMismatch,
                "sides of " + eq.to_string() + " have endpoints " + eq.lhs.start() + "->" + lend +
                    " and " + eq.rhs.start() + "->" + rend);
  }
}

}  // namespace catmig

namespace catmig {

std::string RawPath::to_string() const {
  if (identity_node) return "id:" + *identity_node;
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) out += '.';
    out += edges[i];
  }
  return out;
}

Path resolve_path(const Graph& graph, const RawPath& raw) {
  if (raw.identity_node) {
    graph.node(*raw.identity_node);
    return Path::identity(*raw.identity_node);
  }
  if (raw.edges.empty()) throw Error(ErrorCode::UnknownEdge, "empty path");
  Path p(graph.edge(raw.edges.front()).source, raw.edges);
  graph.check(p);
  return p;
}

RawPath to_raw(const Path& p) {
  if (p.is_identity()) return RawPath::identity(p.start());
  return RawPath::of(p.edges());
}

}  // namespace catmig
