#pragma once

#include <vector>

#include "flowfactory/error.hpp"
#include "flowfactory/graph.hpp"
#include "flowfactory/matrix.hpp"
#include "flowfactory/random.hpp"

namespace flowfactory {

/// Arc weights on the complete digraph over n nodes. BigInt weights are
/// multiplicities; Rational weights feed SArb.
template <class W>
class WeightedDigraph {
 public:
  explicit WeightedDigraph(int node_count)
      : n_(node_count), weights_(static_cast<std::size_t>(node_count)) {}

  int node_count() const { return n_; }

  const W& weight(DirectedEdge arc) const { return weights_(arc.from.index(), arc.to.index()); }

  void set_weight(DirectedEdge arc, W w) {
    if (arc.from == arc.to) fail(ErrorCode::InvalidInstance, "self-loop weight");
    weights_(arc.from.index(), arc.to.index()) = std::move(w);
  }

  void add_weight(DirectedEdge arc, const W& w) { set_weight(arc, weight(arc) + w); }

  /// Arcs with nonzero weight, ascending (from, to).
  ArcList arcs() const {
    ArcList out;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v)
        if (u != v && weight({NodeId(u), NodeId(v)}) != 0) out.push_back({NodeId(u), NodeId(v)});
    return out;
  }

 private:
  int n_;
  Matrix<W> weights_;
};

using MultiDigraph = WeightedDigraph<BigInt>;
using RationalDigraph = WeightedDigraph<Rational>;

/// Rooted-toward arborescence: every non-root node has exactly one out-arc.
struct Arborescence {
  ArcList arcs;  // ascending (from, to)
  NodeId root;
};

// Out-weight convention: L(i,i) = sum_j w(i,j), L(i,j) = -w(i,j). The minor at
// r then counts arborescences directed toward r.
IntMatrix build_laplacian(const MultiDigraph& w);
RationalMatrix build_laplacian(const RationalDigraph& w);

/// Weighted count of arborescences rooted at `root` (Matrix-Tree).
BigInt count_arborescences(const MultiDigraph& w, NodeId root);
Rational count_arborescences(const RationalDigraph& w, NodeId root);

RationalDigraph to_digraph(const CirculationVector& x);

/// Sum over arborescences rooted at `root` of the product of x. Throws
/// NotCirculation when x is off the balance hyperplane.
Rational sarb(const CirculationVector& x, NodeId root);

/// All (n-1)-edge subsets whose undirected support spans the nodes,
/// lexicographic in edge ids. Throws TooLargeForOracle above the cap.
std::vector<DirectedTree> enumerate_directed_trees(const Graph& graph, const EnumerationLimits& limits = {});

/// |T(E)|: spanning trees of the undirected multigraph underlying E.
BigInt count_directed_trees(const Graph& graph);

/// det of every principal (n-1)-minor, in row order.
std::vector<Rational> principal_cofactors(const RationalMatrix& m);

/// True iff all principal cofactors agree. Throws NotZLS unless every row
/// and column sums to zero.
bool zls_cofactor_check(const RationalMatrix& m);

/// Draws an arborescence with probability proportional to the product of
/// its arc multiplicities. Throws NoArborescence when none exists.
Arborescence sample_arborescence(const MultiDigraph& w, NodeId root, UniformSource& rng);

/// Exact probability that sample_arborescence includes `arc`.
Rational arborescence_arc_probability(const MultiDigraph& w, NodeId root, DirectedEdge arc);

/// weight(a) = |{e in E : Flip_f(e) = a}|, each in {0, 1, 2}.
MultiDigraph flip_multigraph(const Graph& graph, const FlowVertex& f);

/// Number of T in T(E) with Flip_f(T) an arborescence rooted at `root`.
BigInt count_flip_trees(const Graph& graph, const FlowVertex& f, NodeId root);

/// Uniform over {T in T(E) : Flip_f(T) in Arb_root}: an arborescence of the
/// flip multigraph by multiplicity, then a uniform preimage per doubled arc.
DirectedTree sample_flip_tree(const Graph& graph, const FlowVertex& f, NodeId root, UniformSource& rng);

}  // namespace flowfactory
