#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace catmig {

enum class NodeKind { Entity, Type };

struct Node {
  std::string name;
  NodeKind kind = NodeKind::Entity;

  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string name;
  std::string source;
  std::string target;

  bool operator==(const Edge&) const = default;
};

/// A morphism of a presented category: a start node followed by a composable
/// word of edges. Composition is concatenation; the empty word is id(start).
/// Edges are written in diagrammatic order, so `admin.works` applies admin
/// first.
class Path {
 public:
  Path() = default;
  Path(std::string start, std::vector<std::string> edges)
      : start_(std::move(start)), edges_(std::move(edges)) {}

  static Path identity(std::string node) { return Path(std::move(node), {}); }

  const std::string& start() const noexcept { return start_; }
  const std::vector<std::string>& edges() const noexcept { return edges_; }
  std::size_t length() const noexcept { return edges_.size(); }
  bool is_identity() const noexcept { return edges_.empty(); }

  /// `id:Node` for identities, otherwise the dot-joined edge names.
  std::string to_string() const;

  bool operator==(const Path&) const = default;

 private:
  std::string start_;
  std::vector<std::string> edges_;
};

/// Length first, then lexicographic on edge names. Identities at different
/// nodes are ordered by node name so the order is total on paths.
bool path_less(const Path& a, const Path& b);

struct PathEquation {
  Path lhs;
  Path rhs;

  std::string to_string() const { return lhs.to_string() + " = " + rhs.to_string(); }
  bool operator==(const PathEquation&) const = default;
};

/// A directed multigraph with named nodes and edges. Names are looked up by
/// hash; declaration order is preserved for deterministic iteration.
class Graph {
 public:
  /// Returns false if the name is already taken.
  bool add_node(Node node);
  /// Returns false if the name is already taken. Endpoints are not checked.
  bool add_edge(Edge edge);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::optional<std::size_t> find_node(const std::string& name) const;
  std::optional<std::size_t> find_edge(const std::string& name) const;
  const Node& node(const std::string& name) const;
  const Edge& edge(const std::string& name) const;

  /// Indices of edges whose source is `node`, in declaration order.
  const std::vector<std::size_t>& out_edges(const std::string& node) const;

  /// Throws UnknownNode / UnknownEdge / EndpointMismatch if `p` is not a
  /// composable path in this graph.
  void check(const Path& p) const;
  bool is_well_typed(const Path& p) const;
  /// Target node of a well-typed path.
  const std::string& end_of(const Path& p) const;

  bool operator==(const Graph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> out_edges_;
};

/// Composition in diagrammatic order: p then q. Throws EndpointMismatch
/// unless end(p) = start(q).
Path compose(const Graph& graph, const Path& p, const Path& q);

/// Throws EndpointMismatch (IllTypedEquation is the schema-level wrapper) if
/// the two sides do not share both endpoints.
void check_equation(const Graph& graph, const PathEquation& eq);

}  // namespace catmig

namespace catmig {

/// A path as written in source text, before its start node is known:
/// either `id:Node` or a non-empty dot-separated edge list.
struct RawPath {
  std::optional<std::string> identity_node;
  std::vector<std::string> edges;

  static RawPath identity(std::string node) { return {std::move(node), {}}; }
  static RawPath of(std::vector<std::string> edges) { return {std::nullopt, std::move(edges)}; }

  std::string to_string() const;
  bool operator==(const RawPath&) const = default;
};

/// Infers the start node from the first edge. Throws UnknownNode,
/// UnknownEdge, or EndpointMismatch.
Path resolve_path(const Graph& graph, const RawPath& raw);

RawPath to_raw(const Path& p);

}  // namespace catmig
