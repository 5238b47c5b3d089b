#include "flowfactory/factory.hpp"

#include <algorithm>
#include <queue>

#include "flowfactory/error.hpp"
#include "flowfactory/spanning.hpp"

namespace flowfactory {

namespace {

constexpr std::size_t kFlipCountCacheLimit = 1 << 16;

[[noreturn]] void restart_cap_hit(std::uint64_t cap) {
  fail(ErrorCode::MaxRestartsExceeded, "gave up after " + std::to_string(cap) + " restarts");
}

}  // namespace

NodeId default_root(const FlowPolytope& polytope) {
  auto incident = polytope.graph().incident_nodes();
  auto it = std::find(incident.begin(), incident.end(), true);
  return it == incident.end() ? NodeId(1) : node_at(static_cast<std::size_t>(it - incident.begin()));
}

FlowSampler::FlowSampler(FlowPolytope polytope, SamplerOptions options)
    : polytope_(std::move(polytope)), max_restarts_(options.max_restarts) {
  if (!undirected_connected(polytope_.graph())) {
    fail(ErrorCode::Disconnected, "edge set is not connected as an undirected graph");
  }
  SubPolytope active = drop_isolated_nodes(polytope_);
  active_ = std::move(active.polytope);
  root_ = options.root.value_or(default_root(polytope_));
  auto pos = std::find(active.nodes.begin(), active.nodes.end(), root_);
  if (pos == active.nodes.end()) {
    fail(ErrorCode::InvalidInstance, "root " + std::to_string(root_.value) + " is not incident to any edge");
  }
  active_root_ = node_at(static_cast<std::size_t>(pos - active.nodes.begin()));
  tree_total_ = count_directed_trees(active_.graph());
}

const BigInt& FlowSampler::flip_tree_count(const FlowVertex& f) {
  if (auto it = flip_counts_.find(f.bits); it != flip_counts_.end()) return it->second;
  BigInt count = count_flip_trees(active_.graph(), f, active_root_);
  if (flip_counts_.size() >= kFlipCountCacheLimit) flip_counts_.clear();
  return flip_counts_.emplace(f.bits, std::move(count)).first->second;
}

FlowSample FlowSampler::sample(CoinSource& coins, UniformSource& rng) {
  const Graph& g = active_.graph();
  const std::size_t m = g.edge_count();
  FlowSample out;
  out.flow.bits.assign(m, 0);
  SampleTrace& trace = out.trace;
  FlowVertex& f = out.flow;

  for (;; ++trace.restarts) {
    if (trace.restarts > max_restarts_) restart_cap_hit(max_restarts_);

    for (EdgeId e = 0; e < m; ++e) f.bits[e] = coins.flip(e) ? 1 : 0;
    trace.total_flips += m;
    if (!is_vertex(active_, f)) {
      ++trace.vertex_rejections;
      continue;
    }
    if (m == 0) return out;

    const BigInt& qualifying = flip_tree_count(f);
    if (qualifying == 0) {
      fail(ErrorCode::NoArborescence, "no directed tree flips to an arborescence for flow " + f.to_string());
    }
    if (!rng.bernoulli(qualifying, tree_total_)) {
      ++trace.tree_rejections;
      continue;
    }

    DirectedTree tree = sample_flip_tree(g, f, active_root_, rng);
    bool accepted = true;
    for (EdgeId e : tree.edges) {
      ++trace.total_flips;
      ++trace.tree_check_flips;
      if (coins.flip(e) == f.test(e)) {
        accepted = false;
        break;
      }
    }
    if (accepted) return out;
    ++trace.coin_rejections;
  }
}

FlowSample sample_flow(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                       const SamplerOptions& options) {
  FlowSampler sampler(polytope, options);
  return sampler.sample(coins, rng);
}

FlowSample sample_flow_by_components(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                                     const SamplerOptions& options) {
  FlowSample out;
  out.flow.bits.assign(polytope.edge_count(), 0);
  for (const auto& part : decompose_components(polytope)) {
    SamplerOptions sub_options{std::nullopt, options.max_restarts};
    if (options.root) {
      auto pos = std::find(part.nodes.begin(), part.nodes.end(), *options.root);
      if (pos != part.nodes.end()) sub_options.root = node_at(static_cast<std::size_t>(pos - part.nodes.begin()));
    }
    RemappedCoins sub_coins(coins, part.edges);
    FlowSample piece = sample_flow(part.polytope, sub_coins, rng, sub_options);
    for (EdgeId e = 0; e < part.edges.size(); ++e) out.flow.bits[part.edges[e]] = piece.flow.bits[e];
    out.trace.total_flips += piece.trace.total_flips;
    out.trace.restarts += piece.trace.restarts;
    out.trace.tree_check_flips += piece.trace.tree_check_flips;
    out.trace.vertex_rejections += piece.trace.vertex_rejections;
    out.trace.tree_rejections += piece.trace.tree_rejections;
    out.trace.coin_rejections += piece.trace.coin_rejections;
  }
  return out;
}

std::pair<NodeId, NodeId> unit_flow_endpoints(const FlowPolytope& polytope) {
  const Graph& g = polytope.graph();
  std::optional<NodeId> source, sink;
  for (int v = 1; v <= g.node_count(); ++v) {
    const auto d = polytope.demand(NodeId(v));
    if (d == 1 && !source) source = NodeId(v);
    else if (d == -1 && !sink) sink = NodeId(v);
    else if (d != 0) fail(ErrorCode::InvalidInstance, "path sampling needs demand +1 at one source and -1 at one sink");
  }
  if (!source || !sink) fail(ErrorCode::InvalidInstance, "path sampling needs a unit source and sink");

  // Kahn's algorithm; any leftover node sits on a cycle.
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& e : g.edges()) ++indegree[e.to.index()];
  std::queue<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto u = ready.front();
    ready.pop();
    ++seen;
    for (EdgeId e : g.out_edges(node_at(u)))
      if (--indegree[g.edge(e).to.index()] == 0) ready.push(g.edge(e).to.index());
  }
  if (seen != n) fail(ErrorCode::InvalidInstance, "path sampling needs an acyclic graph");
  return {*source, *sink};
}

PathSample sample_path(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                       std::uint64_t max_retries) {
  const auto [source, sink] = unit_flow_endpoints(polytope);
  const Graph& g = polytope.graph();
  PathSample out;
  out.flow.bits.assign(g.edge_count(), 0);
  NodeId u = source;
  while (u != sink) {
    const auto out_edges = g.out_edges(u);
    if (out_edges.empty()) fail(ErrorCode::InvalidInstance, "node " + std::to_string(u.value) + " has no way out");
    for (;;) {
      EdgeId e = out_edges[rng.below(static_cast<std::uint64_t>(out_edges.size()))];
      ++out.flips;
      if (coins.flip(e)) {
        out.flow.bits[e] = 1;
        u = g.edge(e).to;
        break;
      }
      if (++out.retries > max_retries) restart_cap_hit(max_retries);
    }
  }
  return out;
}

Rational BernsteinMonomial::evaluate(const InteriorPoint& x) const {
  Rational value = 1;
  for (const auto& [e, ab] : exponents) {
    for (unsigned i = 0; i < ab.first; ++i) value *= x[e];
    for (unsigned i = 0; i < ab.second; ++i) value *= 1 - x[e];
  }
  return value;
}

unsigned BernsteinMonomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, ab] : exponents) d += ab.first + ab.second;
  return d;
}

Rational BernsteinPolynomial::coefficient_sum() const {
  Rational sum = 0;
  for (const auto& t : terms) sum += t.coefficient;
  return sum;
}

Rational BernsteinPolynomial::evaluate(const InteriorPoint& x) const {
  Rational sum = 0;
  for (const auto& t : terms) sum += t.coefficient * t.monomial.evaluate(x);
  return sum;
}

bool sample_monomial_coin(const BernsteinMonomial& monomial, CoinSource& coins) {
  bool all_match = true;
  for (const auto& [e, ab] : monomial.exponents) {
    for (unsigned i = 0; i < ab.first; ++i) all_match = coins.flip(e) && all_match;
    for (unsigned i = 0; i < ab.second; ++i) all_match = !coins.flip(e) && all_match;
  }
  return all_match;
}

bool sample_polynomial_coin(const BernsteinPolynomial& polynomial, CoinSource& coins, UniformSource& rng) {
  BigInt scale = 1;
  for (const auto& t : polynomial.terms) {
    if (t.coefficient < 0) fail(ErrorCode::InvalidInstance, "negative Bernstein coefficient");
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), t.coefficient.get_den_mpz_t());
  }
  if (polynomial.coefficient_sum() > 1) {
    fail(ErrorCode::CoefficientsNotSubunit, "coefficients sum to " + to_string(polynomial.coefficient_sum()));
  }
  // Slots [0, scale): term i owns c_i * scale of them, the rest return 0.
  BigInt z = rng.below(scale);
  for (const auto& t : polynomial.terms) {
    BigInt slots = t.coefficient.get_num() * (scale / t.coefficient.get_den());
    if (z < slots) return sample_monomial_coin(t.monomial, coins);
    z -= slots;
  }
  return false;
}

std::size_t bernoulli_race(const std::vector<BernsteinPolynomial>& candidates, CoinSource& coins,
                           UniformSource& rng, std::uint64_t max_restarts) {
  if (candidates.empty()) fail(ErrorCode::InvalidInstance, "race needs at least one candidate");
  for (const auto& c : candidates) {
    if (c.coefficient_sum() > 1) {
      fail(ErrorCode::CoefficientsNotSubunit, "race candidate coefficients sum to " + to_string(c.coefficient_sum()));
    }
  }
  for (std::uint64_t attempt = 0; attempt <= max_restarts; ++attempt) {
    auto v = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(candidates.size())));
    if (sample_polynomial_coin(candidates[v], coins, rng)) return v;
  }
  restart_cap_hit(max_restarts);
}

BernsteinPolynomial flow_polynomial(const FlowPolytope& polytope, const FlowVertex& f, NodeId root,
                                    const EnumerationLimits& limits) {
  const Graph& g = polytope.graph();
  BernsteinPolynomial out;
  for (const auto& tree : enumerate_directed_trees(g, limits)) {
    if (!is_arborescence(g.node_count(), flip_tree(g, f, tree), root)) continue;
    BernsteinMonomial mono;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const unsigned used = f.test(e) ? 1 : 0;
      mono.exponents[e] = {used, 1 - used};
    }
    for (EdgeId e : tree.edges) {
      auto& ab = mono.exponents[e];
      if (f.test(e)) ++ab.second;
      else ++ab.first;
    }
    out.terms.push_back({Rational(1), std::move(mono)});
  }
  return out;
}

void rescale_to_subunit(std::vector<BernsteinPolynomial>& polynomials) {
  Rational largest = 0;
  for (const auto& p : polynomials) largest = std::max(largest, p.coefficient_sum());
  if (largest <= 1) return;
  for (auto& p : polynomials)
    for (auto& t : p.terms) t.coefficient /= largest;
}

}  // namespace flowfactory
