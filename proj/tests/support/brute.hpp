#pragma once

// Slow, independent reference implementations used to freeze expected values.
// Nothing here calls the library's algorithms; only its value types.

#include <cstdint>
#include <vector>

#include "flowfactory/graph.hpp"

namespace brute {

using flowfactory::BigInt;
using flowfactory::DirectedEdge;
using flowfactory::EdgeId;
using flowfactory::FlowPolytope;
using flowfactory::FlowVertex;
using flowfactory::InteriorPoint;
using flowfactory::NodeId;
using flowfactory::Rational;

using RationalRows = std::vector<std::vector<Rational>>;
using CountRows = std::vector<std::vector<std::int64_t>>;

/// Laplace expansion along the first row.
Rational cofactor_determinant(const RationalRows& m);

/// All 0/1 vectors over E meeting the demands, by scanning 2^|E|.
std::vector<FlowVertex> balanced_vectors(const FlowPolytope& p);

/// All (n-1)-subsets of edge ids whose undirected support spans [n].
std::vector<std::vector<EdgeId>> spanning_subsets(int n, const std::vector<DirectedEdge>& edges);

/// Every non-root node has exactly one out-arc, the root none, and
/// following out-arcs always reaches the root.
bool points_to_root(int n, const std::vector<DirectedEdge>& arcs, NodeId root);

/// Sum over parent functions of prod w(v, parent(v)), by trying every choice.
BigInt arborescence_weight(const CountRows& w, NodeId root);

/// P_{f,r}(x) straight from its definition.
Rational flow_polynomial(const FlowPolytope& p, const FlowVertex& f, NodeId root, const InteriorPoint& x);

FlowVertex vertex_from_edges(const FlowPolytope& p, const std::vector<DirectedEdge>& on);
InteriorPoint constant_point(std::size_t m, const Rational& value);

// Instances.
FlowPolytope two_node_circulation();
FlowPolytope triangle_circulation();
/// Square 1-2, 1-3, 2-4, 3-4 in both directions; edges sorted (from, to).
FlowPolytope square_circulation();
/// s=1 t=2 a=3 b=4 c=5 d=6; undirected s-a a-b a-c c-d c-t b-c s-t, both directions.
FlowPolytope six_node_circulation();
/// 1->2, 1->3, 2->4, 3->4 as a unit 1-4 flow.
FlowPolytope diamond_dag();
/// s=1 a=2 b=3 c=4 d=5 t=6; s-a s-b a-b b-c a-c c-t b-d c-d d-t.
FlowPolytope six_node_dag();
/// The average of its 8 s-t paths.
InteriorPoint six_node_dag_point();

}  // namespace brute
