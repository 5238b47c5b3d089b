#include "flowfactory/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "flowfactory/error.hpp"

namespace flowfactory {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string edge_str(DirectedEdge e) {
  return "(" + std::to_string(e.from.value) + "," + std::to_string(e.to.value) + ")";
}

}  // namespace

Graph::Graph(int node_count, std::vector<DirectedEdge> edges)
    : n_(node_count), edges_(std::move(edges)) {
  if (n_ < 1) fail(ErrorCode::InvalidInstance, "graph needs at least one node");
  lookup_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const DirectedEdge& e = edges_[id];
    if (e.from.value < 1 || e.from.value > n_ || e.to.value < 1 || e.to.value > n_) {
      fail(ErrorCode::InvalidInstance, "edge " + edge_str(e) + " leaves node range 1.." + std::to_string(n_));
    }
    if (e.from == e.to) fail(ErrorCode::InvalidInstance, "self-loop " + edge_str(e));
    auto& slot = lookup_[e.from.index() * static_cast<std::size_t>(n_) + e.to.index()];
    if (slot >= 0) fail(ErrorCode::InvalidInstance, "duplicate edge " + edge_str(e));
    slot = static_cast<std::int64_t>(id);
  }
}

std::optional<EdgeId> Graph::find(DirectedEdge arc) const {
  if (arc.from.value < 1 || arc.from.value > n_ || arc.to.value < 1 || arc.to.value > n_) return std::nullopt;
  auto slot = lookup_[arc.from.index() * static_cast<std::size_t>(n_) + arc.to.index()];
  if (slot < 0) return std::nullopt;
  return static_cast<EdgeId>(slot);
}

std::vector<EdgeId> Graph::out_edges(NodeId v) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edges_.size(); ++e)
    if (edges_[e].from == v) out.push_back(e);
  return out;
}

std::vector<EdgeId> Graph::in_edges(NodeId v) const {
  std::vector<EdgeId> in;
  for (EdgeId e = 0; e < edges_.size(); ++e)
    if (edges_[e].to == v) in.push_back(e);
  return in;
}

std::vector<bool> Graph::incident_nodes() const {
  std::vector<bool> incident(static_cast<std::size_t>(n_), false);
  for (const auto& e : edges_) {
    incident[e.from.index()] = true;
    incident[e.to.index()] = true;
  }
  return incident;
}

FlowPolytope::FlowPolytope(Graph graph, std::vector<std::int64_t> demands)
    : graph_(std::move(graph)), demands_(std::move(demands)) {
  if (demands_.size() != static_cast<std::size_t>(graph_.node_count())) {
    fail(ErrorCode::InvalidInstance, "demand vector length " + std::to_string(demands_.size()) +
                                         " != node count " + std::to_string(graph_.node_count()));
  }
  std::int64_t total = 0;
  for (auto d : demands_) total += d;
  if (total != 0) fail(ErrorCode::InvalidInstance, "demands sum to " + std::to_string(total));
  auto incident = graph_.incident_nodes();
  for (std::size_t v = 0; v < incident.size(); ++v) {
    if (!incident[v] && demands_[v] != 0) {
      fail(ErrorCode::InvalidInstance, "isolated node " + std::to_string(v + 1) + " has nonzero demand");
    }
  }
}

std::vector<EdgeId> FlowVertex::support() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < bits.size(); ++e)
    if (bits[e]) out.push_back(e);
  return out;
}

std::string FlowVertex::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

CirculationVector::CirculationVector(int node_count)
    : n_(node_count), values_(static_cast<std::size_t>(node_count) * static_cast<std::size_t>(node_count)) {}

std::size_t CirculationVector::slot(DirectedEdge arc) const {
  if (arc.from == arc.to || arc.from.value < 1 || arc.from.value > n_ || arc.to.value < 1 || arc.to.value > n_) {
    fail(ErrorCode::InvalidInstance, "arc " + edge_str(arc) + " is not in the complete digraph");
  }
  return arc.from.index() * static_cast<std::size_t>(n_) + arc.to.index();
}

Rational CirculationVector::imbalance(NodeId v) const {
  Rational net = 0;
  for (int w = 1; w <= n_; ++w) {
    if (w == v.value) continue;
    net += at({v, NodeId(w)});
    net -= at({NodeId(w), v});
  }
  return net;
}

bool CirculationVector::is_balanced() const {
  for (int v = 1; v <= n_; ++v)
    if (!is_zero(imbalance(NodeId(v)))) return false;
  return true;
}

FlowPolytope build_circulation_polytope(int n) {
  if (n < 2) fail(ErrorCode::InvalidInstance, "circulation polytope needs n >= 2");
  std::vector<DirectedEdge> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v)
      if (u != v) edges.push_back({NodeId(u), NodeId(v)});
  return FlowPolytope(Graph(n, std::move(edges)), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
}

FlowPolytope build_matching_polytope(int m) {
  if (m < 1) fail(ErrorCode::InvalidInstance, "matching polytope needs m >= 1");
  std::vector<DirectedEdge> edges;
  for (int u = 1; u <= m; ++u)
    for (int v = 1; v <= m; ++v) edges.push_back({NodeId(u), NodeId(v + m)});
  std::vector<std::int64_t> demands(static_cast<std::size_t>(2 * m), -1);
  std::fill(demands.begin(), demands.begin() + m, 1);
  return FlowPolytope(Graph(2 * m, std::move(edges)), std::move(demands));
}

FlowPolytope build_kflow_polytope(int n, int k) {
  if (n < 2) fail(ErrorCode::InvalidInstance, "k-flow polytope needs n >= 2");
  if (k < 1) fail(ErrorCode::InvalidInstance, "k-flow polytope needs k >= 1");
  std::vector<DirectedEdge> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) edges.push_back({NodeId(u), NodeId(v)});
  std::vector<std::int64_t> demands(static_cast<std::size_t>(n), 0);
  demands.front() = k;
  demands.back() = -k;
  return FlowPolytope(Graph(n, std::move(edges)), std::move(demands));
}

bool is_vertex(const FlowPolytope& polytope, const FlowVertex& f) {
  const Graph& g = polytope.graph();
  if (f.size() != g.edge_count()) {
    fail(ErrorCode::InvalidInstance, "flow has " + std::to_string(f.size()) + " entries, polytope has " +
                                         std::to_string(g.edge_count()) + " edges");
  }
  std::vector<std::int64_t> net(static_cast<std::size_t>(g.node_count()), 0);
  for (EdgeId e = 0; e < f.size(); ++e) {
    if (f.bits[e] > 1) fail(ErrorCode::InvalidInstance, "flow entry is not 0/1");
    if (!f.bits[e]) continue;
    ++net[g.edge(e).from.index()];
    --net[g.edge(e).to.index()];
  }
  return net == polytope.demands();
}

bool validate_point(const FlowPolytope& polytope, const InteriorPoint& x) {
  const Graph& g = polytope.graph();
  if (x.size() != g.edge_count()) {
    fail(ErrorCode::InvalidInstance, "point has " + std::to_string(x.size()) + " coordinates, polytope has " +
                                         std::to_string(g.edge_count()) + " edges");
  }
  bool inside = true;
  for (EdgeId e = 0; e < x.size(); ++e) {
    if (x[e] == 0 || x[e] == 1) {
      fail(ErrorCode::BoundaryCoin, "coordinate of edge " + std::to_string(e) + " is " + to_string(x[e]));
    }
    if (x[e] < 0 || x[e] > 1) inside = false;
  }
  if (!inside) return false;
  std::vector<Rational> net(static_cast<std::size_t>(g.node_count()), Rational(0));
  for (EdgeId e = 0; e < x.size(); ++e) {
    net[g.edge(e).from.index()] += x[e];
    net[g.edge(e).to.index()] -= x[e];
  }
  for (std::size_t v = 0; v < net.size(); ++v)
    if (net[v] != polytope.demands()[v]) return false;
  return true;
}

DirectedEdge flip_edge(const Graph& graph, const FlowVertex& f, EdgeId e) {
  const DirectedEdge& arc = graph.edge(e);
  return f.test(e) ? arc.reversed() : arc;
}

ArcList flip_tree(const Graph& graph, const FlowVertex& f, const DirectedTree& tree) {
  ArcList out;
  out.reserve(tree.edges.size());
  for (EdgeId e : tree.edges) out.push_back(flip_edge(graph, f, e));
  return out;
}

CirculationVector embed(const Graph& graph, const std::vector<Rational>& values) {
  CirculationVector out(graph.node_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) out.at(graph.edge(e)) = values.at(e);
  return out;
}

CirculationVector m_map(const FlowPolytope& polytope, const FlowVertex& f, const InteriorPoint& x) {
  const Graph& g = polytope.graph();
  const int n = g.node_count();
  CirculationVector out(n);
  for (int u = 1; u <= n; ++u) {
    for (int v = 1; v <= n; ++v) {
      if (u == v) continue;
      DirectedEdge arc{NodeId(u), NodeId(v)};
      Rational value = 0;
      if (auto e = g.find(arc); e && !f.test(*e)) value += x[*e];
      if (auto r = g.find(arc.reversed()); r && f.test(*r)) value += 1 - x[*r];
      out.at(arc) = value;
    }
  }
  return out;
}

bool undirected_connected(const Graph& graph) {
  DisjointSets sets(static_cast<std::size_t>(graph.node_count()));
  for (const auto& e : graph.edges()) sets.unite(e.from.index(), e.to.index());
  auto incident = graph.incident_nodes();
  std::optional<std::size_t> rep;
  for (std::size_t v = 0; v < incident.size(); ++v) {
    if (!incident[v]) continue;
    if (!rep) rep = sets.find(v);
    else if (sets.find(v) != *rep) return false;
  }
  return true;
}

bool strongly_connected(int node_count, const ArcList& arcs) {
  const auto n = static_cast<std::size_t>(node_count);
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  std::vector<bool> touched(n, false);
  for (const auto& a : arcs) {
    fwd[a.from.index()].push_back(a.to.index());
    bwd[a.to.index()].push_back(a.from.index());
    touched[a.from.index()] = touched[a.to.index()] = true;
  }
  auto start = std::find(touched.begin(), touched.end(), true);
  if (start == touched.end()) return true;
  auto source = static_cast<std::size_t>(start - touched.begin());

  auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(source);
    seen[source] = true;
    while (!frontier.empty()) {
      auto u = frontier.front();
      frontier.pop();
      for (auto w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          frontier.push(w);
        }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (touched[v] && !seen[v]) return false;
    return true;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

bool is_arborescence(int node_count, const ArcList& arcs, NodeId root) {
  const auto n = static_cast<std::size_t>(node_count);
  if (arcs.size() + 1 != n) return false;
  std::vector<std::int64_t> next(n, -1);
  for (const auto& a : arcs) {
    if (a.from == root) return false;
    if (next[a.from.index()] >= 0) return false;
    next[a.from.index()] = static_cast<std::int64_t>(a.to.index());
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t cur = v;
    std::size_t steps = 0;
    while (cur != root.index()) {
      if (next[cur] < 0 || ++steps > n) return false;
      cur = static_cast<std::size_t>(next[cur]);
    }
  }
  return true;
}

namespace {

SubPolytope restrict_to(const FlowPolytope& polytope, const std::vector<std::size_t>& nodes) {
  const Graph& g = polytope.graph();
  std::vector<int> relabel(static_cast<std::size_t>(g.node_count()), 0);
  SubPolytope sub;
  std::vector<std::int64_t> demands;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    relabel[nodes[i]] = static_cast<int>(i) + 1;
    sub.nodes.push_back(node_at(nodes[i]));
    demands.push_back(polytope.demands()[nodes[i]]);
  }
  std::vector<DirectedEdge> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& arc = g.edge(e);
    if (relabel[arc.from.index()] == 0) continue;
    edges.push_back({NodeId(relabel[arc.from.index()]), NodeId(relabel[arc.to.index()])});
    sub.edges.push_back(e);
  }
  std::int64_t total = 0;
  for (auto d : demands) total += d;
  if (total != 0) fail(ErrorCode::EmptyPolytope, "component demands sum to " + std::to_string(total));
  sub.polytope = FlowPolytope(Graph(static_cast<int>(nodes.size()), std::move(edges)), std::move(demands));
  return sub;
}

}  // namespace

std::vector<SubPolytope> decompose_components(const FlowPolytope& polytope) {
  const Graph& g = polytope.graph();
  const auto n = static_cast<std::size_t>(g.node_count());
  DisjointSets sets(n);
  for (const auto& e : g.edges()) sets.unite(e.from.index(), e.to.index());
  auto incident = g.incident_nodes();

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::int64_t> group_of_root(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (!incident[v]) continue;
    auto r = sets.find(v);
    if (group_of_root[r] < 0) {
      group_of_root[r] = static_cast<std::int64_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of_root[r])].push_back(v);
  }

  std::vector<int> owner(n, -1);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    for (auto v : groups[c]) {
      if (owner[v] >= 0) fail(ErrorCode::AmbiguousDecomposition, "node " + std::to_string(v + 1) + " is shared");
      owner[v] = static_cast<int>(c);
    }
  }

  std::vector<SubPolytope> out;
  out.reserve(groups.size());
  for (const auto& nodes : groups) out.push_back(restrict_to(polytope, nodes));
  return out;
}

SubPolytope drop_isolated_nodes(const FlowPolytope& polytope) {
  auto incident = polytope.graph().incident_nodes();
  std::vector<std::size_t> nodes;
  for (std::size_t v = 0; v < incident.size(); ++v)
    if (incident[v]) nodes.push_back(v);
  if (nodes.empty()) nodes.push_back(0);
  return restrict_to(polytope, nodes);
}

std::vector<FlowVertex> enumerate_vertices(const FlowPolytope& polytope, const EnumerationLimits& limits) {
  const Graph& g = polytope.graph();
  const std::size_t m = g.edge_count();
  if (m > limits.max_edges) {
    fail(ErrorCode::TooLargeForOracle,
         std::to_string(m) + " edges exceeds enumeration cap " + std::to_string(limits.max_edges));
  }
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::int64_t> residual(polytope.demands());  // demand still to be met
  std::vector<std::int64_t> rem_out(n, 0), rem_in(n, 0);
  for (const auto& e : g.edges()) {
    ++rem_out[e.from.index()];
    ++rem_in[e.to.index()];
  }
  auto feasible = [&](std::size_t v) { return residual[v] <= rem_out[v] && residual[v] >= -rem_in[v]; };
  for (std::size_t v = 0; v < n; ++v)
    if (!feasible(v)) return {};

  std::vector<FlowVertex> out;
  FlowVertex current{std::vector<std::uint8_t>(m, 0)};

  auto recurse = [&](auto&& self, EdgeId e) -> void {
    if (e == m) {
      out.push_back(current);
      return;
    }
    const auto u = g.edge(e).from.index();
    const auto w = g.edge(e).to.index();
    --rem_out[u];
    --rem_in[w];
    for (std::uint8_t bit : {std::uint8_t{0}, std::uint8_t{1}}) {
      current.bits[e] = bit;
      residual[u] -= bit;
      residual[w] += bit;
      if (feasible(u) && feasible(w)) self(self, e + 1);
      residual[u] += bit;
      residual[w] -= bit;
    }
    current.bits[e] = 0;
    ++rem_out[u];
    ++rem_in[w];
  };
  recurse(recurse, 0);
  return out;
}

ReducedPolytope reduce_polytope(const FlowPolytope& polytope, const EnumerationLimits& limits) {
  auto vertices = enumerate_vertices(polytope, limits);
  if (vertices.empty()) fail(ErrorCode::EmptyPolytope, "polytope has no vertices");
  const Graph& g = polytope.graph();
  ReducedPolytope out;
  std::vector<std::int64_t> demands = polytope.demands();
  std::vector<DirectedEdge> kept_edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto first = vertices.front().bits[e];
    bool constant = std::all_of(vertices.begin(), vertices.end(), [&](const FlowVertex& f) { return f.bits[e] == first; });
    if (!constant) {
      out.kept.push_back(e);
      kept_edges.push_back(g.edge(e));
      continue;
    }
    out.fixed.emplace_back(e, first);
    if (first) {
      --demands[g.edge(e).from.index()];
      ++demands[g.edge(e).to.index()];
    }
  }
  out.polytope = FlowPolytope(Graph(g.node_count(), std::move(kept_edges)), std::move(demands));
  return out;
}

}  // namespace flowfactory
