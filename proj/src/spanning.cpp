#include "flowfactory/spanning.hpp"

#include <algorithm>
#include <numeric>

namespace flowfactory {

namespace {

template <class W, class M>
M laplacian_of(const WeightedDigraph<W>& w) {
  const auto n = static_cast<std::size_t>(w.node_count());
  M lap(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const W& x = w.weight({node_at(i), node_at(j)});
      lap(i, i) += x;
      lap(i, j) -= x;
    }
  }
  return lap;
}

void check_root(int n, NodeId root) {
  if (root.value < 1 || root.value > n) fail(ErrorCode::InvalidInstance, "root " + std::to_string(root.value) + " out of range");
}

// Replace row u by the single arc (u,v) of weight w.
void restrict_row(IntMatrix& lap, std::size_t u, std::size_t v, const BigInt& w) {
  for (std::size_t c = 0; c < lap.size(); ++c) lap(u, c) = 0;
  lap(u, u) = w;
  lap(u, v) = -w;
}

}  // namespace

IntMatrix build_laplacian(const MultiDigraph& w) { return laplacian_of<BigInt, IntMatrix>(w); }

RationalMatrix build_laplacian(const RationalDigraph& w) { return laplacian_of<Rational, RationalMatrix>(w); }

BigInt count_arborescences(const MultiDigraph& w, NodeId root) {
  check_root(w.node_count(), root);
  return determinant(build_laplacian(w).minor(root.index()));
}

Rational count_arborescences(const RationalDigraph& w, NodeId root) {
  check_root(w.node_count(), root);
  return determinant(build_laplacian(w).minor(root.index()));
}

RationalDigraph to_digraph(const CirculationVector& x) {
  RationalDigraph w(x.node_count());
  for (int u = 1; u <= x.node_count(); ++u)
    for (int v = 1; v <= x.node_count(); ++v)
      if (u != v) w.set_weight({NodeId(u), NodeId(v)}, x.at({NodeId(u), NodeId(v)}));
  return w;
}

Rational sarb(const CirculationVector& x, NodeId root) {
  if (!x.is_balanced()) fail(ErrorCode::NotCirculation, "vector violates the balance equations");
  return count_arborescences(to_digraph(x), root);
}

std::vector<DirectedTree> enumerate_directed_trees(const Graph& graph, const EnumerationLimits& limits) {
  const std::size_t m = graph.edge_count();
  if (m > limits.max_edges) {
    fail(ErrorCode::TooLargeForOracle,
         std::to_string(m) + " edges exceeds enumeration cap " + std::to_string(limits.max_edges));
  }
  const auto n = static_cast<std::size_t>(graph.node_count());
  const std::size_t need = n - 1;
  std::vector<DirectedTree> out;
  std::vector<EdgeId> chosen;
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);

  auto recurse = [&](auto&& self, EdgeId next) -> void {
    if (chosen.size() == need) {
      out.push_back(DirectedTree{chosen});
      return;
    }
    for (EdgeId e = next; e + (need - chosen.size()) <= m; ++e) {
      const auto a = label[graph.edge(e).from.index()];
      const auto b = label[graph.edge(e).to.index()];
      if (a == b) continue;
      auto saved = label;
      for (auto& l : label)
        if (l == b) l = a;
      chosen.push_back(e);
      self(self, e + 1);
      chosen.pop_back();
      label = std::move(saved);
    }
  };
  recurse(recurse, 0);
  return out;
}

BigInt count_directed_trees(const Graph& graph) {
  const auto n = static_cast<std::size_t>(graph.node_count());
  IntMatrix lap(n);
  for (const auto& e : graph.edges()) {
    const auto u = e.from.index(), v = e.to.index();
    lap(u, u) += 1;
    lap(v, v) += 1;
    lap(u, v) -= 1;
    lap(v, u) -= 1;
  }
  return determinant(lap.minor(0));
}

std::vector<Rational> principal_cofactors(const RationalMatrix& m) {
  std::vector<Rational> out;
  out.reserve(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) out.push_back(determinant(m.minor(r)));
  return out;
}

bool zls_cofactor_check(const RationalMatrix& m) {
  if (!is_zero_line_sum(m)) fail(ErrorCode::NotZLS, "matrix rows or columns do not sum to zero");
  auto cofactors = principal_cofactors(m);
  return std::adjacent_find(cofactors.begin(), cofactors.end(), std::not_equal_to<>()) == cofactors.end();
}

Arborescence sample_arborescence(const MultiDigraph& w, NodeId root, UniformSource& rng) {
  check_root(w.node_count(), root);
  const auto n = static_cast<std::size_t>(w.node_count());
  const auto r = root.index();
  IntMatrix lap = build_laplacian(w);
  BigInt total = determinant(lap.minor(r));
  if (total <= 0) fail(ErrorCode::NoArborescence, "no arborescence rooted at " + std::to_string(root.value));

  Arborescence out{{}, root};
  for (std::size_t u = 0; u < n; ++u) {
    if (u == r) continue;
    BigInt z = rng.below(total);
    bool chosen = false;
    for (std::size_t v = 0; v < n && !chosen; ++v) {
      if (v == u) continue;
      const BigInt& mult = w.weight({node_at(u), node_at(v)});
      if (mult == 0) continue;
      IntMatrix trial = lap;
      restrict_row(trial, u, v, mult);
      BigInt count = determinant(trial.minor(r));
      if (z < count) {
        lap = std::move(trial);
        total = std::move(count);
        out.arcs.push_back({node_at(u), node_at(v)});
        chosen = true;
      } else {
        z -= count;
      }
    }
    if (!chosen) fail(ErrorCode::IdentityViolated, "out-arc counts do not sum to the arborescence count");
  }
  return out;
}

Rational arborescence_arc_probability(const MultiDigraph& w, NodeId root, DirectedEdge arc) {
  check_root(w.node_count(), root);
  const BigInt& mult = w.weight(arc);
  if (mult == 0 || arc.from == root) return 0;
  IntMatrix lap = build_laplacian(w);
  BigInt total = determinant(lap.minor(root.index()));
  if (total == 0) fail(ErrorCode::NoArborescence, "no arborescence rooted at " + std::to_string(root.value));
  restrict_row(lap, arc.from.index(), arc.to.index(), mult);
  return make_rational(determinant(lap.minor(root.index())), total);
}

MultiDigraph flip_multigraph(const Graph& graph, const FlowVertex& f) {
  MultiDigraph w(graph.node_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) w.add_weight(flip_edge(graph, f, e), BigInt(1));
  return w;
}

BigInt count_flip_trees(const Graph& graph, const FlowVertex& f, NodeId root) {
  return count_arborescences(flip_multigraph(graph, f), root);
}

DirectedTree sample_flip_tree(const Graph& graph, const FlowVertex& f, NodeId root, UniformSource& rng) {
  Arborescence arb = sample_arborescence(flip_multigraph(graph, f), root, rng);
  DirectedTree tree;
  for (const auto& arc : arb.arcs) {
    // Preimages of `arc` under Flip_f: arc itself when unused by f, its
    // reversal when used by f.
    EdgeId candidates[2];
    int count = 0;
    if (auto e = graph.find(arc); e && !f.test(*e)) candidates[count++] = *e;
    if (auto e = graph.find(arc.reversed()); e && f.test(*e)) candidates[count++] = *e;
    if (count == 0) fail(ErrorCode::IdentityViolated, "arborescence arc has no preimage");
    tree.edges.push_back(count == 2 ? candidates[rng.bit() ? 1 : 0] : candidates[0]);
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

}  // namespace flowfactory
