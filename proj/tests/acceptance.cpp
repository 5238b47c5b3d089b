// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "brute.hpp"
#include "cli.hpp"
#include "flowfactory/coins.hpp"
#include "flowfactory/factory.hpp"
#include "flowfactory/io.hpp"
#include "flowfactory/oracle.hpp"

using namespace flowfactory;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

DirectedEdge arc(int u, int v) { return {NodeId(u), NodeId(v)}; }

struct GridInstance {
  std::string name;
  FlowPolytope polytope;
};

std::vector<GridInstance> grid_instances() {
  return {{"circulation n=2", brute::two_node_circulation()},
          {"circulation n=3", brute::triangle_circulation()},
          {"matching m=2", build_matching_polytope(2)},
          {"matching m=3", build_matching_polytope(3)},
          {"kflow n=4 k=2", build_kflow_polytope(4, 2)}};
}

constexpr std::size_t kGridPoints = 20;
constexpr std::uint64_t kGridSeed = 2024;

/// Runs `check` on every (instance, point) of the grid; returns the failures.
Outcome over_grid(const std::function<bool(const Oracle&, const InteriorPoint&)>& check) {
  Outcome out;
  std::size_t cases = 0;
  for (const auto& inst : grid_instances()) {
    const Oracle oracle(inst.polytope);
    for (const auto& x : random_interior_points(oracle.vertices(), kGridPoints, kGridSeed)) {
      ++cases;
      if (!check(oracle, x)) {
        out.pass = false;
        out.detail += "failed on " + inst.name + "; ";
      }
    }
  }
  out.detail += std::to_string(cases) + " (instance, point) cases";
  return out;
}

Outcome exact_marginals() {
  return over_grid([](const Oracle& oracle, const InteriorPoint& x) {
    for (NodeId r : oracle.roots())
      if (oracle.exact_output_distribution(x, r).marginals != x.values) return false;
    return true;
  });
}

Outcome root_independence() {
  return over_grid([](const Oracle& oracle, const InteriorPoint& x) { return oracle.check_root_independence(x); });
}

Outcome marginal_and_positivity() {
  Outcome out = over_grid([](const Oracle& oracle, const InteriorPoint& x) {
    return oracle.check_marginal_identity(x) && oracle.check_positivity(x);
  });
  const FlowPolytope split(Graph(4, {arc(1, 2), arc(2, 1), arc(3, 4), arc(4, 3)}), {0, 0, 0, 0});
  const bool control_fails = !Oracle(split).check_positivity(brute::constant_point(4, Rational(1, 3)));
  out.pass = out.pass && control_fails;
  out.detail += control_fails ? "; disconnected control fails positivity" : "; disconnected control PASSED positivity";
  return out;
}

Outcome triangle_distribution() {
  const auto p = brute::triangle_circulation();
  const auto x = brute::constant_point(6, Rational(1, 3));
  const auto exact = Oracle(p).exact_output_distribution(x, NodeId(1));
  const std::size_t n = 200000;
  const std::uint64_t seed = 1;
  SimulatedCoins coins(x, derive_seed(seed, 1));
  UniformSource rng(derive_seed(seed, 2));
  FlowSampler sampler(p);
  std::vector<FlowVertex> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) samples.push_back(sampler.sample(coins, rng).flow);
  const auto report = statistical_test(exact, samples, 0.001);
  double worst = 0;
  for (const auto& e : report.edges) worst = std::max(worst, std::abs(e.empirical - e.expected.get_d()));
  std::ostringstream detail;
  detail << "chi2 p=" << report.chi_square.p_value << ", max |marginal - 1/3| = " << worst
         << " (epsilon " << hoeffding_epsilon(6, n, 0.001) << ")";
  return {report.pass(), detail.str()};
}

Outcome matrix_tree() {
  std::mt19937_64 gen(5);
  Outcome out;
  std::size_t checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    MultiDigraph w(n);
    brute::CountRows rows(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) {
        if (u == v) continue;
        const auto mult = static_cast<long>(gen() % 3);
        w.set_weight(arc(u, v), BigInt(mult));
        rows[static_cast<std::size_t>(u - 1)][static_cast<std::size_t>(v - 1)] = mult;
      }
    for (int r = 1; r <= n; ++r, ++checks)
      if (count_arborescences(w, NodeId(r)) != brute::arborescence_weight(rows, NodeId(r))) out.pass = false;
  }
  out.detail = std::to_string(checks) + " (digraph, root) pairs";
  return out;
}

Outcome factored_form() {
  return over_grid([](const Oracle& oracle, const InteriorPoint& x) { return oracle.check_factored_form(x); });
}

Outcome bijection() {
  std::ostringstream detail;
  std::size_t total = 0;
  for (const auto& [name, p] : std::vector<std::pair<std::string, FlowPolytope>>{
           {"triangle", brute::triangle_circulation()},
           {"square", brute::square_circulation()},
           {"six-node", brute::six_node_circulation()}}) {
    const std::size_t pairs = Oracle(p).check_all_bijections();
    detail << name << " " << pairs << " pairs; ";
    total += pairs;
  }
  detail << total << " total";
  return {total > 0, detail.str()};
}

Outcome flip_tree_uniformity() {
  const auto p = brute::square_circulation();
  const auto f = brute::vertex_from_edges(p, {arc(3, 1), arc(1, 2), arc(2, 4), arc(4, 3)});
  std::map<std::vector<EdgeId>, std::uint64_t> counts;
  for (const auto& t : brute::spanning_subsets(4, p.graph().edges()))
    if (brute::points_to_root(4, flip_tree(p.graph(), f, DirectedTree{t}), NodeId(1))) counts[t] = 0;
  UniformSource rng(8);
  bool valid = true;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto t = sample_flip_tree(p.graph(), f, NodeId(1), rng);
    auto it = counts.find(t.edges);
    if (it == counts.end() || !is_arborescence(4, flip_tree(p.graph(), f, t), NodeId(1))) {
      valid = false;
      continue;
    }
    ++it->second;
  }
  std::vector<std::uint64_t> observed;
  for (const auto& [t, c] : counts) observed.push_back(c);
  const auto chi = chi_square_goodness_of_fit(observed, std::vector<double>(observed.size(), 1.0 / observed.size()));
  std::ostringstream detail;
  detail << counts.size() << " qualifying trees, chi2 p=" << chi.p_value << (valid ? "" : ", invalid draw seen");
  return {valid && chi.p_value > 0.001, detail.str()};
}

Outcome path_sampler() {
  Outcome out;
  std::ostringstream detail;
  for (const auto& [name, p, x] : std::vector<std::tuple<std::string, FlowPolytope, InteriorPoint>>{
           {"diamond", brute::diamond_dag(), brute::constant_point(4, Rational(1, 2))},
           {"six-node", brute::six_node_dag(), brute::six_node_dag_point()}}) {
    SimulatedCoins coins(x, 11);
    UniformSource rng(12);
    const std::size_t n = 100000;
    std::vector<double> freq(p.edge_count(), 0);
    bool valid = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = sample_path(p, coins, rng);
      valid = valid && is_vertex(p, s.flow);
      for (EdgeId e = 0; e < p.edge_count(); ++e) freq[e] += s.flow.test(e);
    }
    double worst = 0;
    for (EdgeId e = 0; e < p.edge_count(); ++e) {
      const double q = x[e].get_d();
      const double z = std::abs(freq[e] / n - q) / std::sqrt(q * (1 - q) / n);
      worst = std::max(worst, z);
    }
    out.pass = out.pass && valid && worst <= 4;
    detail << name << " max |z|=" << worst << (valid ? "" : " invalid path") << "; ";
  }
  out.detail = detail.str();
  return out;
}

int cli_run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int rc = cli::run(args, o, e);
  if (out) *out = o.str();
  return rc;
}

Outcome determinism_and_controls() {
  const auto dir = std::filesystem::temp_directory_path() / "flowfactory_acceptance";
  std::filesystem::create_directories(dir);
  const auto file = [&](const std::string& name, const Json& doc) {
    const std::string path = (dir / name).string();
    write_file(path, doc.dump());
    return path;
  };
  const auto tri = file("tri.json", polytope_to_json(brute::triangle_circulation()));
  const auto x = file("x.json", point_to_json(brute::constant_point(6, Rational(1, 3))));
  auto off_point = brute::constant_point(6, Rational(1, 3));
  off_point.values[0] = Rational(1, 2);
  const auto off = file("off.json", point_to_json(off_point));
  const auto two = file("two.json", polytope_to_json(brute::two_node_circulation()));
  const auto boundary = file("boundary.json", point_to_json(InteriorPoint{{Rational(1), Rational(1)}}));

  Outcome out;
  auto expect = [&](bool ok, const std::string& what) {
    out.pass = out.pass && ok;
    out.detail += what + (ok ? " ok; " : " FAILED; ");
  };

  std::string a, b;
  const std::vector<std::string> args = {"sample", tri, x, "--seed", "99", "--samples", "1000"};
  expect(cli_run(args, &a) == 0 && cli_run(args, &b) == 0 && a == b && !a.empty(), "byte-identical rerun");
  expect(cli_run({"sample", tri, off}) == cli::exit_code(ErrorCode::NotInPolytope), "off-hull sample");
  expect(cli_run({"verify", tri, off}) == 4, "off-hull verify");
  expect(cli_run({"sample", two, boundary}) == cli::exit_code(ErrorCode::BoundaryCoin), "boundary coin");

  const auto exact =
      Oracle(brute::triangle_circulation()).exact_output_distribution(brute::constant_point(6, Rational(1, 3)), NodeId(1));
  const std::vector<FlowVertex> biased(200000, brute::vertex_from_edges(brute::triangle_circulation(), {}));
  expect(!statistical_test(exact, biased, 0.001).pass(), "always-empty sampler rejected");

  std::filesystem::remove_all(dir);
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: no runtime target
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact marginals", 10, exact_marginals},
      {2, "root independence", 30, root_independence},
      {3, "marginal identity and positivity", 30, marginal_and_positivity},
      {4, "triangle sampler distribution", 120, triangle_distribution},
      {5, "matrix-tree equivalence", 30, matrix_tree},
      {6, "factored form", 0, factored_form},
      {7, "bijection", 60, bijection},
      {8, "flip-tree uniformity", 0, flip_tree_uniformity},
      {9, "path sampler", 0, path_sampler},
      {10, "determinism and negative controls", 0, determinism_and_controls},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + "s target";
    }
    while (!outcome.detail.empty() && (outcome.detail.back() == ' ' || outcome.detail.back() == ';'))
      outcome.detail.pop_back();
    failures += outcome.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%s) [%.2fs]\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
