#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvsim/fraction.hpp"

namespace rvsim {

struct PortTarget {
  std::int32_t node = -1;
  std::int32_t port = -1;
  bool operator==(const PortTarget& o) const { return node == o.node && port == o.port; }
};

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by step() when a route program asks for a port outside 0..deg-1.
class InvalidPortError : public GraphError {
 public:
  InvalidPortError(std::int32_t node, std::int32_t port, std::int32_t degree)
      : GraphError("invalid-port: node " + std::to_string(node) + " port " +
                   std::to_string(port) + " degree " + std::to_string(degree)) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Undirected edge identity. Endpoint `a` is the endpoint with the smaller
/// internal handle and serves as the canonical origin for in-edge positions.
struct EdgeRef {
  std::int32_t a = -1;
  std::int32_t a_port = -1;
  std::int32_t b = -1;
  std::int32_t b_port = -1;

  bool operator==(const EdgeRef& o) const {
    return a == o.a && a_port == o.a_port && b == o.b && b_port == o.b_port;
  }
  bool operator!=(const EdgeRef& o) const { return !(*this == o); }
  bool operator<(const EdgeRef& o) const {
    if (a != o.a) return a < o.a;
    if (a_port != o.a_port) return a_port < o.a_port;
    if (b != o.b) return b < o.b;
    return b_port < o.b_port;
  }
};

/// A point inside (or at an endpoint of) an edge, at an exact rational
/// position measured from the canonical origin endpoint. position 0 or 1 iff
/// the point coincides with an endpoint node.
struct EdgePoint {
  EdgeRef edge;
  Fraction position;
  bool operator==(const EdgePoint& o) const {
    return edge == o.edge && position == o.position;
  }
};

/// Anonymous connected graph with local port numbers 0..deg(v)-1 at every
/// node. Node handles are simulator internals; agents never observe them.
/// Immutable after construction and safe to share across threads.
class PortLabeledGraph {
 public:
  /// Trivial single-node graph (useful as a placeholder value).
  PortLabeledGraph() : adj_(1) {}
  explicit PortLabeledGraph(std::vector<std::vector<PortTarget>> adjacency);

  std::int32_t node_count() const { return static_cast<std::int32_t>(adj_.size()); }
  std::int32_t degree(std::int32_t v) const {
    return static_cast<std::int32_t>(adj_[static_cast<std::size_t>(v)].size());
  }
  std::int32_t edge_count() const { return edge_count_; }

  /// Traverse the edge leaving `node` by local port `exit_port`; returns the
  /// far endpoint and the entry port observed there.
  PortTarget step(std::int32_t node, std::int32_t exit_port) const {
    const auto& row = adj_[static_cast<std::size_t>(node)];
    if (exit_port < 0 || exit_port >= static_cast<std::int32_t>(row.size()))
      throw InvalidPortError(node, exit_port, static_cast<std::int32_t>(row.size()));
    return row[static_cast<std::size_t>(exit_port)];
  }

  /// Canonical identity of the edge leaving `node` by `exit_port`.
  EdgeRef edge_from(std::int32_t node, std::int32_t exit_port) const {
    PortTarget t = step(node, exit_port);
    EdgeRef e;
    if (node < t.node) {
      e = {node, exit_port, t.node, t.port};
    } else {
      e = {t.node, t.port, node, exit_port};
    }
    return e;
  }

  /// Dense index of an undirected edge, stable for this graph instance.
  std::int32_t edge_index(const EdgeRef& e) const;

  const std::vector<EdgeRef>& edges() const { return edges_; }

  bool structurally_equal(const PortLabeledGraph& o) const { return adj_ == o.adj_; }

  std::string serialize() const;
  static PortLabeledGraph parse(const std::string& text);

  /// Canonical key of the underlying unlabeled topology (degree-invariant
  /// minimum adjacency bitset over all node permutations). Only used for
  /// corpus deduplication at desk sizes.
  std::string topology_key() const;

  /// Canonical form of the rooted port-labeled graph: BFS renumbering from
  /// `root` following ports in increasing order. Two rooted graphs are
  /// port-preserving isomorphic iff their canonical forms are equal.
  std::string rooted_canonical_form(std::int32_t root) const;

 private:
  std::vector<std::vector<PortTarget>> adj_;
  std::vector<EdgeRef> edges_;
  std::int32_t edge_count_ = 0;
};

/// Exhaustive bijection search for a home-, adjacency-, and port-preserving
/// isomorphism. Independent oracle for the canonical-form fast path.
bool isomorphic_rooted(const PortLabeledGraph& g1, std::int32_t home1,
                       const PortLabeledGraph& g2, std::int32_t home2);

/// Unrooted variant (tries every root pairing).
bool isomorphic_port_preserving(const PortLabeledGraph& g1, const PortLabeledGraph& g2);

/// G' of the virtual-node construction: a degree-2 node w inserted inside
/// `edge`. w receives the next free handle; its port 0 faces the canonical
/// origin endpoint of `edge`. Returns the new graph and w's handle.
std::pair<PortLabeledGraph, std::int32_t> subdivide_edge(const PortLabeledGraph& g,
                                                         const EdgeRef& edge);

/// Inverse of subdivide_edge: removes degree-2 node `w`, fusing its two edges.
PortLabeledGraph unsubdivide_node(const PortLabeledGraph& g, std::int32_t w);

}  // namespace rvsim

template <>
struct std::hash<rvsim::EdgeRef> {
  std::size_t operator()(const rvsim::EdgeRef& e) const {
    std::uint64_t h = static_cast<std::uint32_t>(e.a);
    h = h * 1000003u + static_cast<std::uint32_t>(e.a_port);
    h = h * 1000003u + static_cast<std::uint32_t>(e.b);
    h = h * 1000003u + static_cast<std::uint32_t>(e.b_port);
    return static_cast<std::size_t>(h);
  }
};
