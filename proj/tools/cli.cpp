#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "flowfactory/coins.hpp"
#include "flowfactory/factory.hpp"
#include "flowfactory/io.hpp"
#include "flowfactory/oracle.hpp"

namespace flowfactory::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitVerifyFailed = 8;

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  std::optional<int> root;
  std::uint64_t max_restarts = kDefaultMaxRestarts;
  std::string out;
};

void add_run_flags(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--seed", cfg.seed, "Seed for coin and sampler streams");
  cmd.add_option("--samples", cfg.samples, "Number of samples")->check(CLI::PositiveNumber);
  cmd.add_option("--root", cfg.root, "Root node (default: lowest incident node)");
  cmd.add_option("--max-restarts", cfg.max_restarts, "Restart cap per sample")->check(CLI::PositiveNumber);
  cmd.add_option("--out", cfg.out, "Output file (default: stdout)");
}

/// Writes to --out when given, stdout otherwise.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file(path, text);
}

std::string decimal6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

InteriorPoint load_coins(const FlowPolytope& polytope, const std::string& path) {
  InteriorPoint x = load_point(path, polytope.edge_count());
  if (!validate_point(polytope, x)) fail(ErrorCode::NotInPolytope, "coin biases are not a point of the polytope");
  return x;
}

Json sample_line(const FlowVertex& flow, std::uint64_t flips, std::uint64_t restarts) {
  Json ids = Json::array();
  for (EdgeId e : flow.support()) ids.push_back(e);
  return {{"flips", flips}, {"flow", ids}, {"restarts", restarts}};
}

struct RunStats {
  std::vector<std::uint64_t> ones;
  std::uint64_t flips = 0;
  std::uint64_t restarts = 0;
  std::size_t samples = 0;

  void add(const FlowVertex& f, std::uint64_t f_flips, std::uint64_t f_restarts) {
    ones.resize(f.size(), 0);
    for (EdgeId e = 0; e < f.size(); ++e) ones[e] += f.test(e) ? 1 : 0;
    flips += f_flips;
    restarts += f_restarts;
    ++samples;
  }

  Json summary() const {
    const auto n = static_cast<double>(samples);
    Json marginals = Json::array();
    for (EdgeId e = 0; e < ones.size(); ++e) {
      marginals.push_back({{"edge", e}, {"value", decimal6(static_cast<double>(ones[e]) / n)}});
    }
    return {{"empirical_marginals", marginals},
            {"mean_flips", decimal6(static_cast<double>(flips) / n)},
            {"mean_restarts", decimal6(static_cast<double>(restarts) / n)},
            {"samples", samples}};
  }
};

int cmd_sample(const std::string& polytope_path, const std::string& coins_path, const RunConfig& cfg,
               const std::string& summary_path, const std::string& tape_path, bool decompose, std::ostream& out,
               std::ostream& err) {
  const FlowPolytope polytope = load_polytope(polytope_path);
  const InteriorPoint x = load_coins(polytope, coins_path);
  SimulatedCoins simulated(x, derive_seed(cfg.seed, 1));
  RecordingCoins recording(simulated);
  CoinSource& coins = tape_path.empty() ? static_cast<CoinSource&>(simulated) : recording;
  UniformSource rng(derive_seed(cfg.seed, 2));

  SamplerOptions options;
  if (cfg.root) options.root = NodeId(*cfg.root);
  options.max_restarts = cfg.max_restarts;

  std::optional<FlowSampler> sampler;
  if (!decompose) sampler.emplace(polytope, options);

  std::ostringstream lines;
  RunStats stats;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    FlowSample s = decompose ? sample_flow_by_components(polytope, coins, rng, options) : sampler->sample(coins, rng);
    lines << sample_line(s.flow, s.trace.total_flips, s.trace.restarts).dump() << '\n';
    stats.add(s.flow, s.trace.total_flips, s.trace.restarts);
  }
  emit(lines.str(), cfg.out, out);
  const std::string summary = stats.summary().dump() + "\n";
  if (summary_path.empty()) err << summary;
  else write_file(summary_path, summary);
  if (!tape_path.empty()) write_file(tape_path, tape_to_jsonl(recording.tape()));
  return kExitOk;
}

int cmd_sample_path(const std::string& polytope_path, const std::string& coins_path, const RunConfig& cfg,
                    const std::string& summary_path, std::ostream& out, std::ostream& err) {
  const FlowPolytope polytope = load_polytope(polytope_path);
  unit_flow_endpoints(polytope);
  const InteriorPoint x = load_coins(polytope, coins_path);
  SimulatedCoins coins(x, derive_seed(cfg.seed, 1));
  UniformSource rng(derive_seed(cfg.seed, 2));

  std::ostringstream lines;
  RunStats stats;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    PathSample s = sample_path(polytope, coins, rng, cfg.max_restarts);
    lines << sample_line(s.flow, s.flips, s.retries).dump() << '\n';
    stats.add(s.flow, s.flips, s.retries);
  }
  emit(lines.str(), cfg.out, out);
  const std::string summary = stats.summary().dump() + "\n";
  if (summary_path.empty()) err << summary;
  else write_file(summary_path, summary);
  return kExitOk;
}

int cmd_dist(const std::string& polytope_path, const std::string& coins_path, const RunConfig& cfg,
             std::ostream& out) {
  const FlowPolytope polytope = load_polytope(polytope_path);
  const InteriorPoint x = load_coins(polytope, coins_path);
  const Oracle oracle(polytope);
  const NodeId root = cfg.root ? NodeId(*cfg.root) : default_root(polytope);
  const ExactDistribution dist = oracle.exact_output_distribution(x, root);

  Json probabilities = Json::object();
  for (const auto& [f, p] : dist.probabilities) probabilities[f.to_string()] = rational_fields(p);
  Json marginals = Json::array();
  for (EdgeId e = 0; e < dist.marginals.size(); ++e) {
    Json entry = rational_fields(dist.marginals[e]);
    entry["edge"] = e;
    marginals.push_back(std::move(entry));
  }
  Json doc = {{"distribution", probabilities}, {"marginals", marginals}, {"root", root.value}};
  emit(doc.dump() + "\n", cfg.out, out);
  return kExitOk;
}

int cmd_verify(const std::string& polytope_path, const std::string& point_path, const std::string& checks_arg,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  const FlowPolytope polytope = load_polytope(polytope_path);
  const InteriorPoint x = load_point(point_path, polytope.edge_count());
  std::vector<std::string> checks;
  std::stringstream ss(checks_arg);
  for (std::string name; std::getline(ss, name, ',');)
    if (!name.empty()) checks.push_back(name);

  const VerificationResult result = run_verification(polytope, x, checks, polytope_path);
  emit(result.report.dump(2) + "\n", out_path, out);
  if (!result.point_valid) {
    err << "point is outside the polytope\n";
    return exit_code(ErrorCode::NotInPolytope);
  }
  if (!result.pass) {
    for (const auto& c : result.report["checks"])
      if (!c["pass"].get<bool>()) err << "check failed: " << c["name"].get<std::string>() << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_bench(const std::string& polytope_path, const std::string& coins_path, const RunConfig& cfg,
              std::ostream& out) {
  const FlowPolytope polytope = load_polytope(polytope_path);
  const InteriorPoint x = load_coins(polytope, coins_path);
  SimulatedCoins coins(x, derive_seed(cfg.seed, 1));
  UniformSource rng(derive_seed(cfg.seed, 2));
  SamplerOptions options;
  if (cfg.root) options.root = NodeId(*cfg.root);
  options.max_restarts = cfg.max_restarts;
  FlowSampler sampler(polytope, options);

  RunStats stats;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    FlowSample s = sampler.sample(coins, rng);
    stats.add(s.flow, s.trace.total_flips, s.trace.restarts);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto n = static_cast<double>(stats.samples);
  Json doc = {{"mean_flips", decimal6(static_cast<double>(stats.flips) / n)},
              {"mean_restarts", decimal6(static_cast<double>(stats.restarts) / n)},
              {"samples", stats.samples},
              {"samples_per_sec", decimal6(seconds > 0 ? n / seconds : 0)},
              {"seconds", decimal6(seconds)}};
  emit(doc.dump() + "\n", cfg.out, out);
  return kExitOk;
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return 2;
    case ErrorCode::BoundaryCoin:
      return 3;
    case ErrorCode::Disconnected:
    case ErrorCode::NoArborescence:
    case ErrorCode::DegenerateDistribution:
      return 5;
    case ErrorCode::MaxRestartsExceeded:
      return 6;
    case ErrorCode::TooLargeForOracle:
      return 7;
    case ErrorCode::IdentityViolated:
      return 8;
    default:
      return 4;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bernoulli factories for flow polytopes", "flowfactory"};
  app.require_subcommand(1);

  std::string kind;
  int nodes = 0, m = 0, k = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a named polytope instance");
  gen->add_option("kind", kind, "circulation | matching | kflow")
      ->required()
      ->check(CLI::IsMember({"circulation", "matching", "kflow"}));
  gen->add_option("--nodes", nodes, "Node count (circulation, kflow)");
  gen->add_option("--m", m, "Side size (matching)");
  gen->add_option("--k", k, "Flow value (kflow)");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  std::string polytope_path, coins_path, summary_path, tape_path, checks;
  bool decompose = false;
  RunConfig cfg;

  auto* sample = app.add_subcommand("sample", "Run the flow factory");
  sample->add_option("polytope", polytope_path)->required();
  sample->add_option("coins", coins_path)->required();
  add_run_flags(*sample, cfg);
  sample->add_option("--summary", summary_path, "Summary file (default: stderr)");
  sample->add_option("--tape", tape_path, "Write the consumed coin tape as JSONL");
  sample->add_flag("--decompose", decompose, "Sample each connected component separately");

  auto* sample_path_cmd = app.add_subcommand("sample-path", "Sample an s-t path in a DAG");
  sample_path_cmd->add_option("polytope", polytope_path)->required();
  sample_path_cmd->add_option("coins", coins_path)->required();
  add_run_flags(*sample_path_cmd, cfg);
  sample_path_cmd->add_option("--summary", summary_path, "Summary file (default: stderr)");

  auto* dist = app.add_subcommand("dist", "Exact output distribution");
  dist->add_option("polytope", polytope_path)->required();
  dist->add_option("coins", coins_path)->required();
  add_run_flags(*dist, cfg);

  auto* verify = app.add_subcommand("verify", "Run the exact identity checks");
  verify->add_option("polytope", polytope_path)->required();
  verify->add_option("point", coins_path)->required();
  verify->add_option("--checks", checks, "Comma-separated subset of checks");
  add_run_flags(*verify, cfg);

  auto* bench = app.add_subcommand("bench", "Time the flow factory");
  bench->add_option("polytope", polytope_path)->required();
  bench->add_option("coins", coins_path)->required();
  add_run_flags(*bench, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*gen) {
      FlowPolytope p;
      if (kind == "circulation") p = build_circulation_polytope(nodes);
      else if (kind == "matching") p = build_matching_polytope(m);
      else p = build_kflow_polytope(nodes, k);
      emit(polytope_to_json(p).dump() + "\n", gen_out, out);
      return kExitOk;
    }
    if (*sample) return cmd_sample(polytope_path, coins_path, cfg, summary_path, tape_path, decompose, out, err);
    if (*sample_path_cmd) return cmd_sample_path(polytope_path, coins_path, cfg, summary_path, out, err);
    if (*dist) return cmd_dist(polytope_path, coins_path, cfg, out);
    if (*verify) return cmd_verify(polytope_path, coins_path, checks, cfg.out, out, err);
    if (*bench) return cmd_bench(polytope_path, coins_path, cfg, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "ParseError: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace flowfactory::cli
