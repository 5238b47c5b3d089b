#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowfactory/rational.hpp"

namespace flowfactory {

/// 1-based node label.
struct NodeId {
  int value = 1;

  constexpr NodeId() = default;
  constexpr explicit NodeId(int v) : value(v) {}

  /// Zero-based position, for indexing dense per-node arrays.
  constexpr std::size_t index() const { return static_cast<std::size_t>(value - 1); }

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

constexpr NodeId node_at(std::size_t index) { return NodeId(static_cast<int>(index) + 1); }

/// Position of an edge in its graph's edge sequence.
using EdgeId = std::size_t;

struct DirectedEdge {
  NodeId from;
  NodeId to;

  constexpr DirectedEdge reversed() const { return {to, from}; }

  friend constexpr auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

using ArcList = std::vector<DirectedEdge>;

/// Simple digraph on nodes 1..n; no self-loops, no parallel arcs.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::vector<DirectedEdge> edges);

  int node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const DirectedEdge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<DirectedEdge>& edges() const { return edges_; }

  std::optional<EdgeId> find(DirectedEdge arc) const;
  bool contains(DirectedEdge arc) const { return find(arc).has_value(); }

  std::vector<EdgeId> out_edges(NodeId v) const;
  std::vector<EdgeId> in_edges(NodeId v) const;

  /// incident[v.index()] is true iff v touches at least one edge.
  std::vector<bool> incident_nodes() const;

 private:
  int n_ = 0;
  std::vector<DirectedEdge> edges_;
  std::vector<std::int64_t> lookup_;  // n*n, -1 when absent
};

/// {x in [0,1]^E : out(v) - in(v) = d_v for every node v}.
class FlowPolytope {
 public:
  FlowPolytope() = default;
  FlowPolytope(Graph graph, std::vector<std::int64_t> demands);

  const Graph& graph() const { return graph_; }
  const std::vector<std::int64_t>& demands() const { return demands_; }
  std::int64_t demand(NodeId v) const { return demands_.at(v.index()); }
  int node_count() const { return graph_.node_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }

 private:
  Graph graph_;
  std::vector<std::int64_t> demands_;
};

/// 0/1 assignment indexed by EdgeId; a vertex once is_vertex() says so.
struct FlowVertex {
  std::vector<std::uint8_t> bits;

  bool test(EdgeId e) const { return bits.at(e) != 0; }
  std::size_t size() const { return bits.size(); }
  std::vector<EdgeId> support() const;
  /// "0110..." in EdgeId order.
  std::string to_string() const;

  friend auto operator<=>(const FlowVertex&, const FlowVertex&) = default;
};

/// Rational coordinates indexed by EdgeId (a polytope point or coin biases).
struct InteriorPoint {
  std::vector<Rational> values;

  const Rational& operator[](EdgeId e) const { return values.at(e); }
  std::size_t size() const { return values.size(); }
};

/// n-1 edge ids of a graph, sorted ascending.
struct DirectedTree {
  std::vector<EdgeId> edges;

  friend auto operator<=>(const DirectedTree&, const DirectedTree&) = default;
};

/// A vector over every ordered pair of the complete digraph on n nodes.
class CirculationVector {
 public:
  explicit CirculationVector(int node_count);

  int node_count() const { return n_; }
  const Rational& at(DirectedEdge arc) const { return values_[slot(arc)]; }
  Rational& at(DirectedEdge arc) { return values_[slot(arc)]; }

  /// Net outflow minus inflow at v.
  Rational imbalance(NodeId v) const;
  bool is_balanced() const;

 private:
  std::size_t slot(DirectedEdge arc) const;

  int n_;
  std::vector<Rational> values_;
};

struct EnumerationLimits {
  std::size_t max_edges = 24;
};

// Named polytopes. Edges come out in lexicographic (from, to) order.
FlowPolytope build_circulation_polytope(int n);
FlowPolytope build_matching_polytope(int m);
FlowPolytope build_kflow_polytope(int n, int k);

bool is_vertex(const FlowPolytope& polytope, const FlowVertex& f);

/// True iff every coordinate lies in (0,1) and the demand equations hold
/// exactly. Throws BoundaryCoin when some coordinate equals 0 or 1.
bool validate_point(const FlowPolytope& polytope, const InteriorPoint& x);

DirectedEdge flip_edge(const Graph& graph, const FlowVertex& f, EdgeId e);
ArcList flip_tree(const Graph& graph, const FlowVertex& f, const DirectedTree& tree);

/// M_f(x)_a = x_a (1 - f_a) + (1 - x_rev(a)) f_rev(a) over all arcs a of the
/// complete digraph, with x and f taken as zero off the edge set.
CirculationVector m_map(const FlowPolytope& polytope, const FlowVertex& f, const InteriorPoint& x);

/// Embeds a per-edge vector into the complete digraph (zero elsewhere).
CirculationVector embed(const Graph& graph, const std::vector<Rational>& values);

bool undirected_connected(const Graph& graph);

/// Strong connectivity over the nodes touched by `arcs`.
bool strongly_connected(int node_count, const ArcList& arcs);

bool is_arborescence(int node_count, const ArcList& arcs, NodeId root);

/// A polytope carved out of a larger one, with the label maps back to it.
struct SubPolytope {
  FlowPolytope polytope;
  std::vector<NodeId> nodes;  // new node i+1 -> original label
  std::vector<EdgeId> edges;  // new edge id -> original edge id
};

/// One sub-polytope per undirected component of the edge set. Isolated nodes
/// are dropped (their demand must be zero).
std::vector<SubPolytope> decompose_components(const FlowPolytope& polytope);

/// Same polytope with isolated nodes removed and nodes relabelled 1..n'.
SubPolytope drop_isolated_nodes(const FlowPolytope& polytope);

/// All 0/1 points satisfying the demand equations, lexicographic in
/// (f_0, f_1, ...). Throws TooLargeForOracle above the edge cap.
std::vector<FlowVertex> enumerate_vertices(const FlowPolytope& polytope,
                                           const EnumerationLimits& limits = {});

struct ReducedPolytope {
  FlowPolytope polytope;
  std::vector<EdgeId> kept;                       // residual edge id -> original
  std::vector<std::pair<EdgeId, int>> fixed;      // original edge id, fixed value
};

/// Eliminates coordinates that are constant over all vertices and shifts the
/// demands so the residual vertices biject with the original ones.
ReducedPolytope reduce_polytope(const FlowPolytope& polytope, const EnumerationLimits& limits = {});

}  // namespace flowfactory
