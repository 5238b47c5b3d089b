#include "flowfactory/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "flowfactory/error.hpp"
#include "flowfactory/random.hpp"

namespace flowfactory {

namespace {

Rational edge_weight(const Rational& x, bool flipped_to_one) { return flipped_to_one ? x : 1 - x; }

bool balanced(const Graph& g, const std::vector<Rational>& values) { return embed(g, values).is_balanced(); }

std::vector<Rational> as_rationals(const std::vector<int>& v) { return {v.begin(), v.end()}; }

ArcList sorted(ArcList arcs) {
  std::sort(arcs.begin(), arcs.end());
  return arcs;
}

/// The undirected tree T oriented so every node reaches `root`.
Arborescence orient_toward(const Graph& g, const DirectedTree& tree, NodeId root) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<NodeId>> adj(n);
  for (EdgeId e : tree.edges) {
    adj[g.edge(e).from.index()].push_back(g.edge(e).to);
    adj[g.edge(e).to.index()].push_back(g.edge(e).from);
  }
  Arborescence out{{}, root};
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(root);
  seen[root.index()] = true;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : adj[u.index()]) {
      if (seen[v.index()]) continue;
      seen[v.index()] = true;
      out.arcs.push_back({v, u});
      frontier.push(v);
    }
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  return out;
}

/// True iff `arcs` form a single directed cycle.
bool is_directed_cycle(const ArcList& arcs) {
  if (arcs.empty()) return false;
  std::map<NodeId, NodeId> next;
  std::map<NodeId, int> indegree;
  for (const auto& a : arcs) {
    if (!next.emplace(a.from, a.to).second) return false;
    if (++indegree[a.to] > 1) return false;
  }
  if (indegree.size() != next.size()) return false;
  NodeId u = arcs.front().from;
  std::size_t steps = 0;
  do {
    auto it = next.find(u);
    if (it == next.end()) return false;
    u = it->second;
    ++steps;
  } while (u != arcs.front().from && steps <= arcs.size());
  return steps == arcs.size();
}

Arborescence relabel(const Arborescence& a, const std::vector<NodeId>& labels) {
  Arborescence out{{}, labels[a.root.index()]};
  for (const auto& arc : a.arcs) out.arcs.push_back({labels[arc.from.index()], labels[arc.to.index()]});
  std::sort(out.arcs.begin(), out.arcs.end());
  return out;
}

ChiSquare finish_chi_square(double statistic, std::size_t cells) {
  ChiSquare out;
  out.statistic = statistic;
  out.degrees_of_freedom = cells > 0 ? cells - 1 : 0;
  if (std::isinf(statistic)) {
    out.p_value = 0;
  } else if (out.degrees_of_freedom == 0) {
    out.p_value = 1;
  } else {
    boost::math::chi_squared dist(static_cast<double>(out.degrees_of_freedom));
    out.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
  }
  return out;
}

}  // namespace

Rational ExactDistribution::probability(const FlowVertex& f) const {
  for (const auto& [v, p] : probabilities)
    if (v == f) return p;
  return 0;
}

Oracle::Oracle(const FlowPolytope& polytope, const EnumerationLimits& limits) : original_(polytope) {
  SubPolytope active = drop_isolated_nodes(polytope);
  active_ = std::move(active.polytope);
  active_nodes_ = std::move(active.nodes);
  vertices_ = enumerate_vertices(active_, limits);
  trees_ = enumerate_directed_trees(active_.graph(), limits);
}

NodeId Oracle::to_active(NodeId root) const {
  auto pos = std::find(active_nodes_.begin(), active_nodes_.end(), root);
  if (pos == active_nodes_.end()) {
    fail(ErrorCode::InvalidInstance, "root " + std::to_string(root.value) + " is not incident to any edge");
  }
  return node_at(static_cast<std::size_t>(pos - active_nodes_.begin()));
}

Rational Oracle::prefix_weight(const FlowVertex& f, const InteriorPoint& x) const {
  Rational w = 1;
  for (EdgeId e = 0; e < active_.edge_count(); ++e) w *= edge_weight(x[e], f.test(e));
  return w;
}

std::vector<const DirectedTree*> Oracle::qualifying_trees(const FlowVertex& f, NodeId root) const {
  const Graph& g = active_.graph();
  const NodeId r = to_active(root);
  std::vector<const DirectedTree*> out;
  for (const auto& tree : trees_)
    if (is_arborescence(g.node_count(), flip_tree(g, f, tree), r)) out.push_back(&tree);
  return out;
}

Rational Oracle::eval_polynomial(const FlowVertex& f, NodeId root, const InteriorPoint& x) const {
  Rational sum = 0;
  for (const DirectedTree* tree : qualifying_trees(f, root)) {
    Rational term = 1;
    for (EdgeId e : tree->edges) term *= edge_weight(x[e], !f.test(e));
    sum += term;
  }
  return prefix_weight(f, x) * sum;
}

Rational Oracle::eval_polynomial_factored(const FlowVertex& f, NodeId root, const InteriorPoint& x) const {
  return prefix_weight(f, x) * sarb(m_map(active_, f, x), to_active(root));
}

bool Oracle::check_root_independence(const InteriorPoint& x) const {
  for (const auto& f : vertices_) {
    const Rational first = eval_polynomial(f, active_nodes_.front(), x);
    for (std::size_t i = 1; i < active_nodes_.size(); ++i)
      if (eval_polynomial(f, active_nodes_[i], x) != first) return false;
  }
  return true;
}

bool Oracle::check_marginal_identity(const InteriorPoint& x) const {
  const std::size_t m = active_.edge_count();
  for (NodeId root : active_nodes_) {
    std::vector<Rational> total(m, Rational(0));
    for (const auto& f : vertices_) {
      const Rational p = eval_polynomial(f, root, x);
      if (p == 0) continue;
      for (EdgeId e = 0; e < m; ++e) total[e] += (Rational(f.test(e) ? 1 : 0) - x[e]) * p;
    }
    for (const auto& t : total)
      if (t != 0) return false;
  }
  return true;
}

bool Oracle::check_positivity(const InteriorPoint& x) const {
  if (active_nodes_.empty()) return false;
  for (NodeId root : active_nodes_) {
    Rational total = 0;
    for (const auto& f : vertices_) total += eval_polynomial(f, root, x);
    if (total <= 0) return false;
  }
  return true;
}

bool Oracle::check_factored_form(const InteriorPoint& x) const {
  for (const auto& f : vertices_)
    for (NodeId root : active_nodes_)
      if (eval_polynomial(f, root, x) != eval_polynomial_factored(f, root, x)) return false;
  return true;
}

ExactDistribution Oracle::exact_output_distribution(const InteriorPoint& x, NodeId root) const {
  ExactDistribution out;
  Rational total = 0;
  for (const auto& f : vertices_) {
    Rational p = eval_polynomial(f, root, x);
    total += p;
    out.probabilities.emplace_back(f, std::move(p));
  }
  if (total == 0) fail(ErrorCode::DegenerateDistribution, "every flow polynomial vanishes at this point");
  out.marginals.assign(active_.edge_count(), Rational(0));
  for (auto& [f, p] : out.probabilities) {
    p /= total;
    for (EdgeId e = 0; e < active_.edge_count(); ++e)
      if (f.test(e)) out.marginals[e] += p;
  }
  return out;
}

bool Oracle::check_flip_arb_exists(const FlowVertex& f) const {
  const Graph& g = active_.graph();
  ArcList arcs;
  for (EdgeId e = 0; e < g.edge_count(); ++e) arcs.push_back(flip_edge(g, f, e));
  if (!undirected_connected(g)) return false;
  return strongly_connected(g.node_count(), arcs);
}

BijectionWitness Oracle::check_bijection(const DirectedTree& tree, EdgeId eta) const {
  const Graph& g = active_.graph();
  const std::size_t m = g.edge_count();
  if (eta >= m) fail(ErrorCode::InvalidInstance, "eta " + std::to_string(eta) + " is not an edge");
  if (std::find(trees_.begin(), trees_.end(), tree) == trees_.end()) {
    fail(ErrorCode::InvalidInstance, "edge set is not a directed tree of this instance");
  }
  if (std::binary_search(tree.edges.begin(), tree.edges.end(), eta)) {
    fail(ErrorCode::InvalidInstance, "eta lies in the tree");
  }
  auto violated = [](const std::string& what) { fail(ErrorCode::IdentityViolated, "bijection: " + what); };

  const NodeId s = g.edge(eta).from;
  const NodeId t = g.edge(eta).to;
  BijectionWitness w;
  w.eta = eta;
  w.a_s = orient_toward(g, tree, s);
  w.a_t = orient_toward(g, tree, t);
  const std::set<DirectedEdge> in_s(w.a_s.arcs.begin(), w.a_s.arcs.end());
  const std::set<DirectedEdge> in_t(w.a_t.arcs.begin(), w.a_t.arcs.end());

  w.g.assign(m, 0);
  w.g[eta] = 1;
  for (EdgeId e : tree.edges) {
    const bool s_side = in_s.count(g.edge(e)) > 0;
    const bool t_side = in_t.count(g.edge(e)) > 0;
    if (s_side && !t_side) {
      w.c_plus.push_back(e);
      w.g[e] = 1;
    } else if (t_side && !s_side) {
      w.c_minus.push_back(e);
      w.g[e] = -1;
    }
  }

  if (!balanced(g, as_rationals(w.g))) violated("g is not balanced");

  ArcList cycle{g.edge(eta)};
  for (EdgeId e : w.c_plus) cycle.push_back(g.edge(e));
  for (EdgeId e : w.c_minus) cycle.push_back(g.edge(e).reversed());
  if (!is_directed_cycle(cycle)) violated("eta + C+ + reversed C- is not a directed cycle");

  CirculationVector decomposition(g.node_count());
  for (const auto& a : cycle) decomposition.at(a) += 1;
  for (EdgeId e : w.c_minus) {
    decomposition.at(g.edge(e)) -= 1;
    decomposition.at(g.edge(e).reversed()) -= 1;
  }
  const CirculationVector embedded = embed(g, as_rationals(w.g));
  for (int u = 1; u <= g.node_count(); ++u)
    for (int v = 1; v <= g.node_count(); ++v)
      if (u != v && decomposition.at({NodeId(u), NodeId(v)}) != embedded.at({NodeId(u), NodeId(v)})) {
        violated("g differs from c - sum nu(e)");
      }

  std::set<FlowVertex> from, to;
  for (const auto& f : vertices_) {
    const ArcList flipped = sorted(flip_tree(g, f, tree));
    if (!f.test(eta) && flipped == w.a_s.arcs) from.insert(f);
    if (f.test(eta) && flipped == w.a_t.arcs) to.insert(f);
  }
  w.from_count = from.size();
  w.to_count = to.size();

  std::set<FlowVertex> images;
  std::vector<bool> on_tree(m, false);
  for (EdgeId e : tree.edges) on_tree[e] = true;
  on_tree[eta] = true;
  for (const auto& f : from) {
    FlowVertex image = f;
    for (EdgeId e = 0; e < m; ++e) {
      const int value = static_cast<int>(f.bits[e]) + w.g[e];
      if (value < 0 || value > 1) violated("f + g leaves {0,1} at edge " + std::to_string(e) + " for " + f.to_string());
      image.bits[e] = static_cast<std::uint8_t>(value);
      if (!on_tree[e] && image.bits[e] != f.bits[e]) violated("f + g moved an edge off T + eta");
    }
    if (!is_vertex(active_, image)) violated("f + g is not a vertex for " + f.to_string());
    if (sorted(flip_tree(g, image, tree)) != w.a_t.arcs) violated("Flip_{f+g}(T) is not A_t for " + f.to_string());
    if (!images.insert(image).second) violated("f -> f + g is not injective");
  }
  if (images != to) violated("image of F_s(T) differs from F_t(T)");

  w.a_s = relabel(w.a_s, active_nodes_);
  w.a_t = relabel(w.a_t, active_nodes_);
  return w;
}

std::size_t Oracle::check_all_bijections() const {
  std::size_t pairs = 0;
  for (const auto& tree : trees_) {
    for (EdgeId eta = 0; eta < active_.edge_count(); ++eta) {
      if (std::binary_search(tree.edges.begin(), tree.edges.end(), eta)) continue;
      check_bijection(tree, eta);
      ++pairs;
    }
  }
  return pairs;
}

bool Oracle::check_parallel_to_circ() const {
  // Balance is linear, so differences against one vertex cover every pair.
  if (vertices_.empty()) return true;
  const Graph& g = active_.graph();
  const auto& base = vertices_.front();
  for (const auto& f : vertices_) {
    std::vector<Rational> diff(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) diff[e] = int(f.bits[e]) - int(base.bits[e]);
    if (!balanced(g, diff)) return false;
  }
  return true;
}

PreimageReport Oracle::check_preimage_identity(const FlowVertex& f, const InteriorPoint& x) const {
  const Graph& g = active_.graph();
  const CirculationVector mapped = m_map(active_, f, x);
  PreimageReport report;
  for (int u = 1; u <= g.node_count(); ++u) {
    for (int v = 1; v <= g.node_count(); ++v) {
      if (u == v) continue;
      const DirectedEdge a{NodeId(u), NodeId(v)};
      const auto fwd = g.find(a);
      const auto rev = g.find(a.reversed());
      Rational lhs = 0;
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (flip_edge(g, f, e) == a) lhs += edge_weight(x[e], !f.test(e));
      if (lhs != mapped.at(a)) report.holds = false;
      if (!fwd && !rev) {
        ++report.cases[4];
      } else {
        const int fa = fwd && f.test(*fwd) ? 1 : 0;
        const int fr = rev && f.test(*rev) ? 1 : 0;
        ++report.cases[static_cast<std::size_t>(2 * fa + fr)];
      }
    }
  }
  return report;
}

bool Oracle::check_matrix_tree(const FlowVertex& f) const {
  const Graph& g = active_.graph();
  for (int r = 1; r <= g.node_count(); ++r) {
    const NodeId root(r);
    BigInt enumerated = 0;
    for (const auto& tree : trees_)
      if (is_arborescence(g.node_count(), flip_tree(g, f, tree), root)) ++enumerated;
    if (count_flip_trees(g, f, root) != enumerated) return false;
  }
  return true;
}

bool Oracle::check_zls(const FlowVertex& f, const InteriorPoint& x) const {
  try {
    return zls_cofactor_check(build_laplacian(to_digraph(m_map(active_, f, x))));
  } catch (const Error& err) {
    if (err.code() == ErrorCode::NotZLS) return false;
    throw;
  }
}

std::vector<InteriorPoint> random_interior_points(const std::vector<FlowVertex>& vertices, std::size_t count,
                                                  std::uint64_t seed) {
  if (vertices.empty()) fail(ErrorCode::EmptyPolytope, "no vertices to combine");
  const std::size_t m = vertices.front().size();
  for (EdgeId e = 0; e < m; ++e) {
    bool zero = false, one = false;
    for (const auto& f : vertices) (f.test(e) ? one : zero) = true;
    if (!zero || !one) {
      fail(ErrorCode::InvalidInstance, "edge " + std::to_string(e) + " is fixed over all vertices; no interior point");
    }
  }
  UniformSource rng(seed);
  std::vector<InteriorPoint> out;
  while (out.size() < count) {
    std::vector<std::uint64_t> weights(vertices.size());
    std::uint64_t total = 0;
    for (auto& w : weights) total += (w = rng.below(std::uint64_t{17}));
    if (total == 0) continue;
    InteriorPoint x;
    x.values.assign(m, Rational(0));
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (EdgeId e = 0; e < m; ++e)
        if (vertices[i].test(e)) x.values[e] += weights[i];
    bool interior = true;
    for (auto& v : x.values) {
      v /= total;
      if (v == 0 || v == 1) interior = false;
    }
    if (interior) out.push_back(std::move(x));
  }
  return out;
}

ChiSquare chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                     const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size()) fail(ErrorCode::InvalidInstance, "cell count mismatch");
  double n = 0;
  for (auto o : observed) n += static_cast<double>(o);
  if (n == 0) fail(ErrorCode::InvalidInstance, "no observations");
  double statistic = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0) {
      if (observed[i] > 0) statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++cells;
    const double expected = n * probabilities[i];
    const double diff = static_cast<double>(observed[i]) - expected;
    statistic += diff * diff / expected;
  }
  return finish_chi_square(statistic, cells);
}

ChiSquare chi_square_homogeneity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidInstance, "cell count mismatch");
  double na = 0, nb = 0;
  for (auto v : a) na += static_cast<double>(v);
  for (auto v : b) nb += static_cast<double>(v);
  if (na == 0 || nb == 0) fail(ErrorCode::InvalidInstance, "no observations");
  const double n = na + nb;
  double statistic = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double column = static_cast<double>(a[i] + b[i]);
    if (column == 0) continue;
    ++cells;
    const double ea = na * column / n;
    const double eb = nb * column / n;
    statistic += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
    statistic += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
  }
  return finish_chi_square(statistic, cells);
}

double hoeffding_epsilon(std::size_t edges, std::size_t samples, double alpha) {
  return std::sqrt(std::log(2.0 * static_cast<double>(edges) / alpha) / (2.0 * static_cast<double>(samples)));
}

StatisticalReport statistical_test(const ExactDistribution& exact, const std::vector<FlowVertex>& samples,
                                   double significance) {
  if (samples.empty()) fail(ErrorCode::InvalidInstance, "statistical test needs at least one sample");
  StatisticalReport report;
  report.samples = samples.size();

  std::map<FlowVertex, std::size_t> cell;
  std::vector<double> probabilities;
  for (const auto& [f, p] : exact.probabilities) {
    cell.emplace(f, probabilities.size());
    probabilities.push_back(p.get_d());
  }
  // Outputs that are not vertices land in an extra zero-probability cell.
  probabilities.push_back(0);
  std::vector<std::uint64_t> observed(probabilities.size(), 0);
  const std::size_t m = exact.marginals.size();
  std::vector<std::uint64_t> ones(m, 0);
  for (const auto& f : samples) {
    auto it = cell.find(f);
    ++observed[it == cell.end() ? probabilities.size() - 1 : it->second];
    for (EdgeId e = 0; e < m && e < f.size(); ++e) ones[e] += f.test(e) ? 1 : 0;
  }
  report.chi_square = chi_square_goodness_of_fit(observed, probabilities);
  report.chi_square_pass = report.chi_square.p_value > significance;

  const double eps = hoeffding_epsilon(m, samples.size(), significance);
  report.marginals_pass = true;
  for (EdgeId e = 0; e < m; ++e) {
    EdgeCheck check;
    check.edge = e;
    check.expected = exact.marginals[e];
    check.empirical = static_cast<double>(ones[e]) / static_cast<double>(samples.size());
    check.epsilon = eps;
    check.pass = std::abs(check.empirical - check.expected.get_d()) <= eps;
    report.marginals_pass = report.marginals_pass && check.pass;
    report.edges.push_back(std::move(check));
  }
  return report;
}

VerificationResult run_verification(const FlowPolytope& polytope, const InteriorPoint& x,
                                    const std::vector<std::string>& checks, const std::string& instance_label,
                                    const EnumerationLimits& limits) {
  VerificationResult result;
  Json& report = result.report;
  report["instance"] = instance_label;
  report["checks"] = Json::array();
  report["exact_marginals"] = Json::array();

  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    report["checks"].push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    result.pass = result.pass && pass;
  };

  if (x.size() != polytope.edge_count() || !validate_point(polytope, x)) {
    result.point_valid = false;
    record("validate-point", false, "point is outside the polytope");
    return result;
  }

  std::vector<std::string> selected = checks.empty() ? verification_check_names() : checks;
  for (const auto& name : selected) {
    const auto& known = verification_check_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      fail(ErrorCode::ParseError, "unknown check '" + name + "'");
    }
  }

  const Oracle oracle(polytope, limits);
  const auto count_of = [](std::size_t k, const char* what) { return std::to_string(k) + " " + what; };
  const std::string scope = count_of(oracle.vertices().size(), "vertices") + ", " +
                            count_of(oracle.trees().size(), "directed trees") + ", " +
                            count_of(oracle.roots().size(), "roots");

  auto all_vertices = [&](auto&& pred) {
    for (const auto& f : oracle.vertices())
      if (!pred(f)) return std::optional<FlowVertex>(f);
    return std::optional<FlowVertex>();
  };

  for (const auto& name : selected) {
    if (name == "root-independence") {
      record(name, oracle.check_root_independence(x), scope);
    } else if (name == "marginal") {
      record(name, oracle.check_marginal_identity(x), scope);
    } else if (name == "positivity") {
      const bool pass = oracle.check_positivity(x);
      record(name, pass, pass ? scope : "sum of flow polynomials is zero; " + scope);
    } else if (name == "factored-form") {
      record(name, oracle.check_factored_form(x), scope);
    } else if (name == "bijection") {
      try {
        record(name, true, count_of(oracle.check_all_bijections(), "(tree, eta) pairs"));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::IdentityViolated) throw;
        record(name, false, err.what());
      }
    } else if (name == "parallel-to-circ") {
      record(name, oracle.check_parallel_to_circ(), scope);
    } else if (name == "zls") {
      auto bad = all_vertices([&](const FlowVertex& f) { return oracle.check_zls(f, x); });
      record(name, !bad, bad ? "unequal cofactors for " + bad->to_string() : scope);
    } else if (name == "matrix-tree") {
      auto bad = all_vertices([&](const FlowVertex& f) { return oracle.check_matrix_tree(f); });
      record(name, !bad, bad ? "count mismatch for " + bad->to_string() : scope);
    }
  }

  if (!oracle.roots().empty()) {
    try {
      const ExactDistribution dist = oracle.exact_output_distribution(x, oracle.roots().front());
      for (EdgeId e = 0; e < dist.marginals.size(); ++e) {
        Json entry = rational_fields(dist.marginals[e]);
        entry["edge"] = e;
        report["exact_marginals"].push_back(std::move(entry));
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::DegenerateDistribution) throw;
    }
  }
  return result;
}

}  // namespace flowfactory
