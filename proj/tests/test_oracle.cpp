#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "brute.hpp"
#include "flowfactory/factory.hpp"
#include "flowfactory/oracle.hpp"

using namespace flowfactory;

namespace {

DirectedEdge arc(int u, int v) { return {NodeId(u), NodeId(v)}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

FlowVertex empty_flow(const FlowPolytope& p) { return brute::vertex_from_edges(p, {}); }

FlowPolytope disconnected_pair() {
  return FlowPolytope(Graph(4, {arc(1, 2), arc(2, 1), arc(3, 4), arc(4, 3)}), {0, 0, 0, 0});
}

std::vector<FlowPolytope> small_instances() {
  return {brute::two_node_circulation(), brute::triangle_circulation(), build_matching_polytope(2),
          build_matching_polytope(3), build_kflow_polytope(4, 2)};
}

EdgeId edge_id(const FlowPolytope& p, int u, int v) { return *p.graph().find(arc(u, v)); }

}  // namespace

TEST(Oracle, TwoNodePolynomialValues) {
  const auto p = brute::two_node_circulation();
  const Oracle oracle(p);
  const auto x = brute::constant_point(2, Rational(1, 3));
  const auto empty = empty_flow(p);
  const auto cycle = brute::vertex_from_edges(p, {arc(1, 2), arc(2, 1)});
  for (int r : {1, 2}) {
    EXPECT_EQ(oracle.eval_polynomial(empty, NodeId(r), x), Rational(4, 27));
    EXPECT_EQ(oracle.eval_polynomial(cycle, NodeId(r), x), Rational(2, 27));
  }
  EXPECT_EQ(oracle.eval_polynomial_factored(cycle, NodeId(1), x), Rational(2, 27));
  EXPECT_EQ(oracle.qualifying_trees(empty, NodeId(1)).size(), 1u);
  EXPECT_TRUE(oracle.check_marginal_identity(x));
  EXPECT_TRUE(oracle.check_positivity(x));
}

TEST(Oracle, DisconnectedPolynomialsVanish) {
  const auto p = disconnected_pair();
  const Oracle oracle(p);
  const auto x = brute::constant_point(4, Rational(1, 3));
  EXPECT_TRUE(oracle.trees().empty());
  for (const auto& f : oracle.vertices()) EXPECT_EQ(oracle.eval_polynomial(f, NodeId(1), x), 0);
  EXPECT_FALSE(oracle.check_positivity(x));
  EXPECT_EQ(code_of([&] { oracle.exact_output_distribution(x, NodeId(1)); }), ErrorCode::DegenerateDistribution);
}

TEST(Oracle, MatchesBruteForcePolynomial) {
  for (const auto& p : small_instances()) {
    const Oracle oracle(p);
    const auto points = random_interior_points(oracle.vertices(), 3, 21);
    for (const auto& x : points)
      for (const auto& f : oracle.vertices())
        for (NodeId r : oracle.roots()) {
          const Rational expected = brute::flow_polynomial(p, f, r, x);
          EXPECT_EQ(oracle.eval_polynomial(f, r, x), expected);
          EXPECT_EQ(oracle.eval_polynomial_factored(f, r, x), expected);
        }
  }
}

TEST(Oracle, IdentitiesOnRandomGrid) {
  for (const auto& p : small_instances()) {
    const Oracle oracle(p);
    for (const auto& x : random_interior_points(oracle.vertices(), 20, 99)) {
      ASSERT_TRUE(validate_point(p, x));
      EXPECT_TRUE(oracle.check_root_independence(x));
      EXPECT_TRUE(oracle.check_marginal_identity(x));
      EXPECT_TRUE(oracle.check_positivity(x));
      EXPECT_TRUE(oracle.check_factored_form(x));
      for (NodeId r : oracle.roots()) {
        const auto dist = oracle.exact_output_distribution(x, r);
        EXPECT_EQ(dist.marginals, x.values);
        Rational total = 0;
        for (const auto& [f, pr] : dist.probabilities) {
          EXPECT_GE(pr, 0);
          total += pr;
        }
        EXPECT_EQ(total, 1);
      }
    }
  }
}

TEST(Oracle, OffHullPointBreaksMarginalIdentity) {
  const auto p = brute::triangle_circulation();
  const Oracle oracle(p);
  auto x = brute::constant_point(6, Rational(1, 3));
  x.values[0] = Rational(1, 2);
  ASSERT_FALSE(validate_point(p, x));
  EXPECT_FALSE(oracle.check_marginal_identity(x));
}

TEST(Oracle, ExactDistributions) {
  const auto two = brute::two_node_circulation();
  const auto d2 = Oracle(two).exact_output_distribution(brute::constant_point(2, Rational(1, 3)), NodeId(2));
  EXPECT_EQ(d2.probability(empty_flow(two)), Rational(2, 3));
  EXPECT_EQ(d2.probability(brute::vertex_from_edges(two, {arc(1, 2), arc(2, 1)})), Rational(1, 3));

  const auto tri = brute::triangle_circulation();
  const auto dt = Oracle(tri).exact_output_distribution(brute::constant_point(6, Rational(1, 3)), NodeId(1));
  EXPECT_EQ(dt.probabilities.size(), 10u);
  EXPECT_EQ(dt.marginals, std::vector<Rational>(6, Rational(1, 3)));

  const auto match = build_matching_polytope(2);
  const auto dm = Oracle(match).exact_output_distribution(brute::constant_point(4, Rational(1, 2)), NodeId(1));
  ASSERT_EQ(dm.probabilities.size(), 2u);
  for (const auto& [f, pr] : dm.probabilities) EXPECT_EQ(pr, Rational(1, 2));
}

TEST(Oracle, FlipArborescenceExistence) {
  const auto tri = brute::triangle_circulation();
  EXPECT_TRUE(Oracle(tri).check_flip_arb_exists(empty_flow(tri)));

  const FlowPolytope cycle(Graph(3, {arc(1, 2), arc(2, 3), arc(3, 1)}), {0, 0, 0});
  EXPECT_TRUE(Oracle(cycle).check_flip_arb_exists(empty_flow(cycle)));

  const FlowPolytope path(Graph(3, {arc(1, 2), arc(2, 3)}), {0, 0, 0});
  const Oracle path_oracle(path);
  for (const auto& f : path_oracle.vertices()) EXPECT_FALSE(path_oracle.check_flip_arb_exists(f));
}

TEST(Oracle, BijectionWorkedExample) {
  const auto p = brute::six_node_circulation();
  const Oracle oracle(p);
  DirectedTree tree;
  for (auto [u, v] : std::vector<std::pair<int, int>>{{1, 3}, {3, 4}, {5, 3}, {6, 5}, {5, 2}})
    tree.edges.push_back(edge_id(p, u, v));
  std::sort(tree.edges.begin(), tree.edges.end());
  const EdgeId eta = edge_id(p, 1, 2);

  const auto w = oracle.check_bijection(tree, eta);
  std::vector<int> expected(p.edge_count(), 0);
  expected[edge_id(p, 1, 2)] = 1;
  expected[edge_id(p, 5, 3)] = 1;
  expected[edge_id(p, 1, 3)] = -1;
  expected[edge_id(p, 5, 2)] = -1;
  EXPECT_EQ(w.g, expected);
  EXPECT_EQ(w.c_plus, std::vector<EdgeId>{edge_id(p, 5, 3)});
  EXPECT_EQ(w.a_s.root, NodeId(1));
  EXPECT_EQ(w.a_t.root, NodeId(2));
  EXPECT_EQ(w.from_count, w.to_count);
  EXPECT_GT(w.from_count, 0u);

  const auto f = brute::vertex_from_edges(p, {arc(1, 3), arc(3, 4), arc(4, 5), arc(5, 2), arc(2, 1)});
  ASSERT_TRUE(is_vertex(p, f));
  EXPECT_TRUE(is_arborescence(6, flip_tree(p.graph(), f, tree), NodeId(1)));
  FlowVertex image = f;
  for (EdgeId e = 0; e < p.edge_count(); ++e) image.bits[e] = static_cast<std::uint8_t>(f.bits[e] + w.g[e]);
  EXPECT_EQ(image, brute::vertex_from_edges(p, {arc(3, 4), arc(4, 5), arc(2, 1), arc(1, 2), arc(5, 3)}));
  EXPECT_TRUE(is_arborescence(6, flip_tree(p.graph(), image, tree), NodeId(2)));
}

TEST(Oracle, BijectionEveryPair) {
  EXPECT_EQ(Oracle(brute::triangle_circulation()).check_all_bijections(), 48u);
  EXPECT_GT(Oracle(brute::square_circulation()).check_all_bijections(), 0u);
  EXPECT_GT(Oracle(brute::six_node_circulation()).check_all_bijections(), 0u);
}

TEST(Oracle, BijectionRejectsBadInput) {
  const auto p = brute::triangle_circulation();
  const Oracle oracle(p);
  const auto& tree = oracle.trees().front();
  EXPECT_EQ(code_of([&] { oracle.check_bijection(tree, tree.edges.front()); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([&] { oracle.check_bijection(DirectedTree{{0}}, 3); }), ErrorCode::InvalidInstance);
}

TEST(Oracle, VertexDifferencesAreCirculations) {
  for (const auto& p : small_instances()) EXPECT_TRUE(Oracle(p).check_parallel_to_circ());
}

TEST(Oracle, PreimageIdentityCoversEveryCase) {
  const auto p = brute::six_node_circulation();
  const Oracle oracle(p);
  const auto x = random_interior_points(oracle.vertices(), 1, 3).front();
  std::array<std::size_t, 5> seen{};
  for (const auto& f : oracle.vertices()) {
    const auto report = oracle.check_preimage_identity(f, x);
    EXPECT_TRUE(report.holds);
    for (std::size_t i = 0; i < 5; ++i) seen[i] += report.cases[i];
  }
  for (std::size_t i = 0; i < 5; ++i) EXPECT_GT(seen[i], 0u) << "case " << i;
}

TEST(Oracle, MatrixTreeAndZls) {
  for (const auto& p : {brute::triangle_circulation(), brute::square_circulation(), build_kflow_polytope(4, 2)}) {
    const Oracle oracle(p);
    const auto x = random_interior_points(oracle.vertices(), 1, 8).front();
    for (const auto& f : oracle.vertices()) {
      EXPECT_TRUE(oracle.check_matrix_tree(f));
      EXPECT_TRUE(oracle.check_zls(f, x));
    }
  }
}

TEST(Oracle, EnumerationCap) {
  EXPECT_EQ(code_of([] { Oracle(brute::triangle_circulation(), EnumerationLimits{5}); }),
            ErrorCode::TooLargeForOracle);
}

TEST(RandomInteriorPoints, StrictlyInsideAndReproducible) {
  const auto p = build_kflow_polytope(4, 2);
  const auto vertices = enumerate_vertices(p);
  const auto a = random_interior_points(vertices, 10, 4);
  EXPECT_EQ(a.size(), 10u);
  for (const auto& x : a) EXPECT_TRUE(validate_point(p, x));
  const auto b = random_interior_points(vertices, 10, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);

  const FlowPolytope line(Graph(3, {arc(1, 2), arc(2, 3)}), {1, 0, -1});
  EXPECT_EQ(code_of([&] { random_interior_points(enumerate_vertices(line), 1, 1); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { random_interior_points({}, 1, 1); }), ErrorCode::EmptyPolytope);
}

TEST(Statistics, ChiSquareAndHoeffding) {
  const auto fit = chi_square_goodness_of_fit({50, 50}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(fit.statistic, 0);
  EXPECT_EQ(fit.degrees_of_freedom, 1u);
  EXPECT_DOUBLE_EQ(fit.p_value, 1);
  // 1 degree of freedom, statistic 4: p = erfc(sqrt 2).
  EXPECT_NEAR(chi_square_goodness_of_fit({60, 40}, {0.5, 0.5}).p_value, std::erfc(std::sqrt(2.0)), 1e-12);
  EXPECT_EQ(chi_square_goodness_of_fit({1, 9}, {0, 1}).p_value, 0);
  EXPECT_DOUBLE_EQ(hoeffding_epsilon(6, 200000, 0.001), std::sqrt(std::log(12000.0) / 400000.0));
  EXPECT_GT(chi_square_homogeneity({100, 200}, {100, 200}).p_value, 0.99);
}

TEST(Statistics, ExactSamplesPassAndBiasedSamplerFails) {
  const auto p = brute::triangle_circulation();
  const auto exact = Oracle(p).exact_output_distribution(brute::constant_point(6, Rational(1, 3)), NodeId(1));

  UniformSource rng(17);
  std::vector<BigInt> cumulative;
  BigInt den = 1;
  for (const auto& [f, pr] : exact.probabilities) den = lcm(den, pr.get_den());
  BigInt acc = 0;
  for (const auto& [f, pr] : exact.probabilities) {
    acc += pr.get_num() * (den / pr.get_den());
    cumulative.push_back(acc);
  }
  std::vector<FlowVertex> samples;
  for (int i = 0; i < 50000; ++i) {
    const BigInt u = rng.below(den);
    const auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    samples.push_back(exact.probabilities[k].first);
  }
  EXPECT_TRUE(statistical_test(exact, samples, 0.001).pass());

  const std::vector<FlowVertex> biased(50000, empty_flow(p));
  const auto report = statistical_test(exact, biased, 0.001);
  EXPECT_FALSE(report.chi_square_pass);
  EXPECT_FALSE(report.marginals_pass);

  EXPECT_EQ(code_of([&] { statistical_test(exact, {}, 0.001); }), ErrorCode::InvalidInstance);
}

TEST(Verification, AllChecksPassOnTriangle) {
  const auto p = brute::triangle_circulation();
  const auto result = run_verification(p, brute::constant_point(6, Rational(1, 3)), {}, "triangle");
  EXPECT_TRUE(result.pass);
  EXPECT_TRUE(result.point_valid);
  EXPECT_EQ(result.report["checks"].size(), verification_check_names().size());
  EXPECT_EQ(result.report["exact_marginals"].size(), 6u);
}

TEST(Verification, NegativeControls) {
  const auto tri = brute::triangle_circulation();
  auto off = brute::constant_point(6, Rational(1, 3));
  off.values[0] = Rational(1, 2);
  const auto invalid = run_verification(tri, off, {}, "off-hull");
  EXPECT_FALSE(invalid.point_valid);
  EXPECT_FALSE(invalid.pass);
  EXPECT_EQ(invalid.report["checks"][0]["name"], "validate-point");

  const auto split = run_verification(disconnected_pair(), brute::constant_point(4, Rational(1, 3)), {"positivity"}, "split");
  EXPECT_FALSE(split.pass);
  EXPECT_TRUE(split.report["exact_marginals"].empty());

  EXPECT_EQ(code_of([&] { run_verification(tri, brute::constant_point(6, Rational(1, 3)), {"nope"}, "t"); }),
            ErrorCode::ParseError);
}
