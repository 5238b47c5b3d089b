#pragma once

// Exact-arithmetic checks of the identities behind the flow factory, at
// desk scale (vertex and tree sets are enumerated).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flowfactory/graph.hpp"
#include "flowfactory/io.hpp"
#include "flowfactory/spanning.hpp"

namespace flowfactory {

struct ExactDistribution {
  std::vector<std::pair<FlowVertex, Rational>> probabilities;  // enumeration order
  std::vector<Rational> marginals;                             // per EdgeId

  Rational probability(const FlowVertex& f) const;
};

/// Witness for the F_s(T) -> F_t(T) bijection f -> f + g.
struct BijectionWitness {
  std::vector<int> g;  // per EdgeId, in {-1, 0, +1}
  EdgeId eta = 0;
  std::vector<EdgeId> c_plus;
  std::vector<EdgeId> c_minus;
  Arborescence a_s;
  Arborescence a_t;
  std::size_t from_count = 0;  // |F_s(T)|
  std::size_t to_count = 0;    // |F_t(T)|
};

/// How many arcs of the complete digraph fell in each Flip^{-1} case.
struct PreimageReport {
  bool holds = true;
  // Indexed by 2*f_e + f_rev(e) for e in E; index 4 counts arcs outside E.
  std::array<std::size_t, 5> cases{};
};

/// Holds the enumerated vertices and directed trees of one polytope.
/// Isolated nodes are dropped up front (edge ids are unchanged); roots are
/// always given in the caller's node labels.
class Oracle {
 public:
  explicit Oracle(const FlowPolytope& polytope, const EnumerationLimits& limits = {});

  const FlowPolytope& polytope() const { return original_; }
  const std::vector<FlowVertex>& vertices() const { return vertices_; }
  const std::vector<DirectedTree>& trees() const { return trees_; }
  /// Incident nodes, in the caller's labels.
  const std::vector<NodeId>& roots() const { return active_nodes_; }

  /// Trees T with Flip_f(T) an arborescence rooted at `root`.
  std::vector<const DirectedTree*> qualifying_trees(const FlowVertex& f, NodeId root) const;

  /// P_{f,r}(x) summed over qualifying trees.
  Rational eval_polynomial(const FlowVertex& f, NodeId root, const InteriorPoint& x) const;
  /// prod_e x_e^{f_e} (1-x_e)^{1-f_e} * SArb_r(M_f(x)).
  Rational eval_polynomial_factored(const FlowVertex& f, NodeId root, const InteriorPoint& x) const;

  bool check_root_independence(const InteriorPoint& x) const;
  /// sum_f (f - x) P_{f,r}(x) == 0 for every root r.
  bool check_marginal_identity(const InteriorPoint& x) const;
  /// sum_f P_{f,r}(x) > 0 for every root r.
  bool check_positivity(const InteriorPoint& x) const;
  bool check_factored_form(const InteriorPoint& x) const;

  /// Throws DegenerateDistribution when every polynomial vanishes.
  ExactDistribution exact_output_distribution(const InteriorPoint& x, NodeId root) const;

  /// Flip_f(E) strongly connected.
  bool check_flip_arb_exists(const FlowVertex& f) const;

  /// Builds g for (T, eta) and verifies the bijection by enumeration.
  /// Throws IdentityViolated on any failed property.
  BijectionWitness check_bijection(const DirectedTree& tree, EdgeId eta) const;
  /// check_bijection over every tree and every eta outside it; returns the
  /// number of pairs checked.
  std::size_t check_all_bijections() const;

  bool check_parallel_to_circ() const;

  /// sum_{e' in Flip_f^{-1}(a)} x_{e'}^{1-f_{e'}} (1-x_{e'})^{f_{e'}} == M_f(x)_a
  /// for every arc a of the complete digraph.
  PreimageReport check_preimage_identity(const FlowVertex& f, const InteriorPoint& x) const;

  /// Determinant count of flip trees equals the enumerated count, all roots.
  bool check_matrix_tree(const FlowVertex& f) const;

  /// Laplacian of M_f(x) is zero-line-sum with equal principal cofactors.
  bool check_zls(const FlowVertex& f, const InteriorPoint& x) const;

 private:
  NodeId to_active(NodeId root) const;
  Rational prefix_weight(const FlowVertex& f, const InteriorPoint& x) const;

  FlowPolytope original_;
  FlowPolytope active_;
  std::vector<NodeId> active_nodes_;
  std::vector<FlowVertex> vertices_;
  std::vector<DirectedTree> trees_;
};

/// Interior points built as convex combinations of all vertices with random
/// positive integer weights; points touching the boundary are redrawn.
/// Throws InvalidInstance when some coordinate is constant over the vertices.
std::vector<InteriorPoint> random_interior_points(const std::vector<FlowVertex>& vertices, std::size_t count,
                                                  std::uint64_t seed);

struct ChiSquare {
  double statistic = 0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1;
};

/// Observed counts against cell probabilities. An observation in a
/// zero-probability cell gives an infinite statistic and p = 0.
ChiSquare chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                     const std::vector<double>& probabilities);

/// Two-sample homogeneity test over the same cells.
ChiSquare chi_square_homogeneity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

/// Two-sided Hoeffding radius for |edges| simultaneous means at level alpha.
double hoeffding_epsilon(std::size_t edges, std::size_t samples, double alpha);

struct EdgeCheck {
  EdgeId edge = 0;
  Rational expected;
  double empirical = 0;
  double epsilon = 0;
  bool pass = false;
};

struct StatisticalReport {
  std::size_t samples = 0;
  ChiSquare chi_square;
  bool chi_square_pass = false;
  std::vector<EdgeCheck> edges;
  bool marginals_pass = false;

  bool pass() const { return chi_square_pass && marginals_pass; }
};

StatisticalReport statistical_test(const ExactDistribution& exact, const std::vector<FlowVertex>& samples,
                                   double significance);

inline const std::vector<std::string>& verification_check_names() {
  static const std::vector<std::string> names = {"root-independence", "marginal",         "positivity", "factored-form",
                                                 "bijection",         "parallel-to-circ", "zls",        "matrix-tree"};
  return names;
}

struct VerificationResult {
  Json report;
  bool point_valid = true;
  bool pass = true;
};

/// Runs the named checks (all of them when `checks` is empty) and builds the
/// report document. An invalid point short-circuits with a single failing
/// "validate-point" entry.
VerificationResult run_verification(const FlowPolytope& polytope, const InteriorPoint& x,
                                    const std::vector<std::string>& checks, const std::string& instance_label,
                                    const EnumerationLimits& limits = {});

}  // namespace flowfactory
