#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "flowfactory/coins.hpp"
#include "flowfactory/graph.hpp"
#include "flowfactory/random.hpp"

namespace flowfactory {

inline constexpr std::uint64_t kDefaultMaxRestarts = 10'000'000;

/// Per-run counters. total_flips == (restarts + 1) * |E| + tree_check_flips.
struct SampleTrace {
  std::uint64_t total_flips = 0;
  std::uint64_t restarts = 0;
  std::uint64_t tree_check_flips = 0;
  std::uint64_t vertex_rejections = 0;  // step 2: f not a vertex
  std::uint64_t tree_rejections = 0;    // tree drawn from T(E) does not flip to an arborescence
  std::uint64_t coin_rejections = 0;    // step 4: a tree coin matched f
};

struct FlowSample {
  FlowVertex flow;
  SampleTrace trace;
};

struct SamplerOptions {
  std::optional<NodeId> root;  // default: lowest node incident to an edge
  std::uint64_t max_restarts = kDefaultMaxRestarts;
};

NodeId default_root(const FlowPolytope& polytope);

/// Bernoulli factory for flow-like polytopes.
///
/// One attempt: flip every coin once into f; restart unless f is a vertex;
/// draw T uniformly from T(E) and restart unless Flip_f(T) is an arborescence
/// rooted at the root; flip each coin of T once and restart if any outcome
/// equals f_e; otherwise output f. A vertex f is thus produced with
/// probability proportional to
///
///   prod_{e in E} p_e^{f_e} (1-p_e)^{1-f_e}
///     * sum_{T : Flip_f(T) in Arb_root} prod_{e in T} p_e^{1-f_e} (1-p_e)^{f_e},
///
/// whose marginals equal p for every p in P ∩ (0,1)^E when E is connected.
///
/// The draw from T(E) is realized as an exact Bernoulli(N_f / |T(E)|) gate
/// followed by a uniform draw among the N_f qualifying trees. Every restart
/// re-flips all coins. Isolated nodes are ignored.
class FlowSampler {
 public:
  explicit FlowSampler(FlowPolytope polytope, SamplerOptions options = {});

  FlowSample sample(CoinSource& coins, UniformSource& rng);

  const FlowPolytope& polytope() const { return polytope_; }
  NodeId root() const { return root_; }
  const BigInt& directed_tree_count() const { return tree_total_; }

 private:
  const BigInt& flip_tree_count(const FlowVertex& f);

  FlowPolytope polytope_;
  FlowPolytope active_;  // isolated nodes dropped; same edge ids
  NodeId root_;
  NodeId active_root_;
  BigInt tree_total_;
  std::uint64_t max_restarts_;
  std::map<std::vector<std::uint8_t>, BigInt> flip_counts_;
};

/// One-shot wrapper around FlowSampler.
FlowSample sample_flow(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                       const SamplerOptions& options = {});

/// Samples each undirected component independently and concatenates.
FlowSample sample_flow_by_components(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                                     const SamplerOptions& options = {});

struct PathSample {
  FlowVertex flow;
  std::uint64_t flips = 0;
  std::uint64_t retries = 0;
};

/// Unit s-t flow in a DAG: walk from the source, choosing an out-edge
/// uniformly and keeping it iff its coin shows 1. Throws InvalidInstance
/// unless the polytope is a unit flow on an acyclic graph.
PathSample sample_path(const FlowPolytope& polytope, CoinSource& coins, UniformSource& rng,
                       std::uint64_t max_retries = kDefaultMaxRestarts);

/// Checks the shape sample_path needs; returns {source, sink}.
std::pair<NodeId, NodeId> unit_flow_endpoints(const FlowPolytope& polytope);

/// prod_i x_i^{a_i} (1 - x_i)^{b_i}
struct BernsteinMonomial {
  std::map<EdgeId, std::pair<unsigned, unsigned>> exponents;

  Rational evaluate(const InteriorPoint& x) const;
  unsigned degree() const;
};

struct BernsteinTerm {
  Rational coefficient;
  BernsteinMonomial monomial;
};

struct BernsteinPolynomial {
  std::vector<BernsteinTerm> terms;

  Rational coefficient_sum() const;
  Rational evaluate(const InteriorPoint& x) const;
};

/// 1 with probability M(x), spending exactly degree() flips.
bool sample_monomial_coin(const BernsteinMonomial& monomial, CoinSource& coins);

/// 1 with probability Q(x). Throws CoefficientsNotSubunit if the
/// coefficients sum above one.
bool sample_polynomial_coin(const BernsteinPolynomial& polynomial, CoinSource& coins, UniformSource& rng);

/// Index v with probability Q_v(x) / sum_w Q_w(x).
std::size_t bernoulli_race(const std::vector<BernsteinPolynomial>& candidates, CoinSource& coins,
                           UniformSource& rng, std::uint64_t max_restarts = kDefaultMaxRestarts);

template <class Label>
Label bernoulli_race(const std::map<Label, BernsteinPolynomial>& candidates, CoinSource& coins, UniformSource& rng,
                     std::uint64_t max_restarts = kDefaultMaxRestarts) {
  std::vector<const Label*> labels;
  std::vector<BernsteinPolynomial> polys;
  for (const auto& [label, poly] : candidates) {
    labels.push_back(&label);
    polys.push_back(poly);
  }
  return *labels[bernoulli_race(polys, coins, rng, max_restarts)];
}

/// The flow polynomial of f at `root` written out term by term: one unit
/// coefficient per qualifying directed tree.
BernsteinPolynomial flow_polynomial(const FlowPolytope& polytope, const FlowVertex& f, NodeId root,
                                    const EnumerationLimits& limits = {});

/// Divides every polynomial by the largest coefficient sum when it exceeds
/// one; a common factor leaves race probabilities unchanged.
void rescale_to_subunit(std::vector<BernsteinPolynomial>& polynomials);

}  // namespace flowfactory
