// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, verify, stats, gen.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aimi/graph.hpp"
#include "aimi/harness.hpp"
#include "aimi/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kSuiteFailed = 2;

// Expands "--config file" into the flags it lists. Flags given on the
// command line take precedence over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    const std::string path = args[i + 1];
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    std::ifstream in(path);
    if (!in) throw aimi::ValidationError("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw aimi::ParseError(line_no, "expected key=value in " + path);
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string flag = "--" + trim(line.substr(0, eq));
      if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
      args.push_back(flag);
      args.push_back(trim(line.substr(eq + 1)));
    }
    break;
  }
  return args;
}

std::vector<aimi::PolicyKind> parse_policies(const std::string& list) {
  std::vector<aimi::PolicyKind> out;
  std::stringstream ss(list);
  for (std::string id; std::getline(ss, id, ',');) {
    const auto k = aimi::parse_policy_id(id);
    if (!k) throw aimi::ValidationError("unknown policy id '" + id + "'");
    out.push_back(*k);
  }
  return out;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw aimi::ValidationError("cannot write " + path);
  out << j.dump(2) << '\n';
}

struct RunArgs {
  aimi::ExperimentConfig cfg;
  std::string policies = "rdm,bgg_dgr,grd_kw,grd_lf,grd_lnf";
  std::string c = "1";
  std::string draw_mode = "matrix";
  std::size_t m_cap = 200000;
  std::size_t m = 0;
  std::size_t rounds = 0;
  std::string summary_path;
};

int do_run(RunArgs& a) {
  auto& s = a.cfg.settings;
  s.policies = parse_policies(a.policies);
  if (a.rounds > 0) s.rounds = a.rounds;
  if (a.c == "auto") {
    s.c.reset();
  } else {
    try {
      s.c = std::stod(a.c);
    } catch (const std::exception&) {
      throw aimi::ValidationError("--c must be a number or 'auto'");
    }
  }
  const auto mode = aimi::parse_draw_mode(a.draw_mode);
  if (!mode) throw aimi::ValidationError("--draw-mode must be 'matrix' or 'streaming'");
  s.draw_mode = *mode;
  s.greedy.m_cap = a.m_cap;
  if (a.m > 0) s.greedy.m_override = a.m;
  if (a.cfg.out_path.empty()) throw aimi::ValidationError("--out is required");

  const aimi::ExperimentInput input = aimi::load_experiment_input(a.cfg);
  const aimi::ResultTable table = aimi::run_experiment(input, s);
  {
    std::ofstream out(a.cfg.out_path, std::ios::binary);
    if (!out) throw aimi::ValidationError("cannot write " + a.cfg.out_path);
    aimi::write_results_csv(out, table);
  }
  if (!a.summary_path.empty()) {
    std::ofstream out(a.summary_path, std::ios::binary);
    if (!out) throw aimi::ValidationError("cannot write " + a.summary_path);
    aimi::write_aggregate_csv(out, aimi::aggregate(table));
  }
  std::cerr << "graph: " << input.graph.num_nodes() << " nodes, " << input.graph.num_arcs()
            << " arcs; rounds " << table.rounds << ", reps " << table.reps << ", c " << table.c << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string suite = "all";
  std::size_t max_nodes = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string graph;
};

nlohmann::json run_instance_suite(const std::string& name, const VerifyArgs& a, bool& ok) {
  const std::size_t trials = a.trials ? a.trials : 50;
  aimi::TinyLimits lim{2, a.max_nodes ? a.max_nodes : 5, 6, 2, 2};
  aimi::Rng rng(a.seed);
  aimi::CheckReport merged;
  merged.check = name;
  merged.seed = a.seed;
  double worst = 1.0;
  std::size_t histories = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto inst = aimi::random_tiny_instance(rng, lim);
    const auto r = name == "theorem3" ? aimi::check_theorem3(inst) : aimi::check_lemmas_1_2(inst);
    ++merged.instances;
    if (name == "theorem3") worst = std::min(worst, r.summary["ratio"].get<double>());
    else histories += r.summary["histories"].get<std::size_t>();
    for (const auto& v : r.violations) merged.violations.push_back(v);
  }
  if (name == "theorem3") merged.summary = {{"min_ratio", worst}, {"bound", 1.0 - std::exp(-1.0)}};
  else merged.summary = {{"histories", histories}};
  ok = ok && merged.passed();
  return merged.to_json();
}

int do_verify(const VerifyArgs& a) {
  const std::vector<std::string> known{"theorem1", "theorem3", "lemmas", "order", "tail"};
  std::vector<std::string> suites;
  if (a.suite == "all") suites = known;
  else if (std::find(known.begin(), known.end(), a.suite) != known.end()) suites = {a.suite};
  else throw aimi::ValidationError("unknown suite '" + a.suite + "'");

  bool ok = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& name : suites) {
    if (name == "theorem1") {
      aimi::TheoremOneConfig cfg;
      if (a.trials) cfg.trials = a.trials;
      if (a.max_nodes) cfg.limits.max_nodes = a.max_nodes;
      const auto r = aimi::check_theorem1(cfg, a.seed);
      ok = ok && r.passed();
      reports.push_back(r.to_json());
    } else if (name == "theorem3" || name == "lemmas") {
      reports.push_back(run_instance_suite(name, a, ok));
    } else if (name == "order") {
      aimi::TinyLimits lim{3, a.max_nodes ? a.max_nodes : 5, 6, 2, 2};
      reports.push_back(aimi::order_sensitivity_search(a.trials ? a.trials : 10000, a.seed, lim).to_json());
    } else if (name == "tail") {
      aimi::DiGraph g;
      if (!a.graph.empty()) {
        std::ifstream in(a.graph);
        if (!in) throw aimi::ValidationError("cannot open graph file " + a.graph);
        aimi::Rng prob_rng(a.seed);
        g = aimi::load_edge_list(in, {0.0, 0.1}, prob_rng);
      } else {
        g.add_nodes(64);
        for (aimi::NodeId v = 0; v < 64; ++v) g.add_arc(v, (v + 1) % 64, 0.5);
      }
      const auto r = aimi::cascade_tail_check(g, g.probabilities(), a.trials ? a.trials : 100000, a.seed);
      ok = ok && r.passed();
      reports.push_back(r.to_json());
    }
  }
  write_json(suites.size() == 1 ? reports[0] : reports, a.out);
  return ok ? kOk : kSuiteFailed;
}

int do_stats(const std::string& path, aimi::ProbabilityRange prob, std::uint64_t seed) {
  if (path.empty()) throw aimi::ValidationError("--graph is required");
  std::ifstream in(path);
  if (!in) throw aimi::ValidationError("cannot open graph file " + path);
  aimi::Rng rng(aimi::hash64({seed, 0x70726f62ULL}));
  const aimi::DiGraph g = aimi::load_edge_list(in, prob, rng);
  if (g.empty()) throw aimi::ValidationError("graph is empty");
  const auto s = aimi::graph_stats(g);
  write_json({{"nodes", s.num_nodes},
              {"arcs", s.num_arcs},
              {"p_max", s.p_max},
              {"d_max", s.d_max},
              {"l_max", s.l_max},
              {"p_max_times_d_max", s.criticality()},
              {"subcritical", s.subcritical}},
             "-");
  return kOk;
}

struct GenArgs {
  std::size_t nodes = 100;
  std::size_t arcs = 900;
  std::size_t d = 5;
  std::uint64_t seed = 1;
  double skew = 0.8;
  bool linear = false;
  aimi::ProbabilityRange prob{0.0, 0.1};
  std::string out;
  std::string features_out;
};

int do_gen(const GenArgs& a) {
  if (a.out.empty()) throw aimi::ValidationError("--out is required");
  aimi::Rng rng(a.seed);
  aimi::DiGraph g = aimi::generate_digraph(a.nodes, a.arcs, rng, a.prob, a.skew);
  aimi::Rng feat_rng(aimi::hash64({a.seed, 0x66656174ULL}));
  const aimi::ProbabilityRange linear_range{std::max(a.prob.lo, 0.01), a.prob.hi};
  const auto model = aimi::synth_node_features(g, a.d, feat_rng, linear_range);
  if (a.linear) g.set_probabilities(model.probabilities);
  std::ofstream out(a.out);
  if (!out) throw aimi::ValidationError("cannot write " + a.out);
  aimi::write_edge_list(out, g);
  if (!a.features_out.empty()) {
    std::ofstream fout(a.features_out);
    if (!fout) throw aimi::ValidationError("cannot write " + a.features_out);
    aimi::write_node_features(fout, g, model.node_features);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive influence maximization with intermediary constraints"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a multi-policy seeding experiment");
  auto& cfg = run_args.cfg;
  run->add_option("--graph", cfg.graph_path, "Edge list: 'u v' or 'u v p' per line");
  run->add_option("--features", cfg.features_path, "Node features: 'u f1 ... fd' per line");
  run->add_option("--rewards", cfg.rewards_path, "Node rewards: 'u r' per line");
  run->add_option("--policies", run_args.policies, "Comma-separated policy ids")->capture_default_str();
  run->add_option("--rounds", run_args.rounds, "Rounds T (default |V|/2)");
  run->add_option("--reps", cfg.settings.reps, "Replications")->capture_default_str();
  run->add_option("--seed", cfg.settings.master_seed, "Master seed")->capture_default_str();
  run->add_option("--out", cfg.out_path, "Per-round CSV output");
  run->add_option("--summary", run_args.summary_path, "Per-policy mean/std CSV output");
  run->add_option("--alpha", cfg.settings.greedy.alpha, "Greedy alpha (> 1)")->capture_default_str();
  run->add_option("--beta", cfg.settings.greedy.beta, "Greedy beta in (0, 1)")->capture_default_str();
  run->add_option("--m-cap", run_args.m_cap, "Cap on RR sets per decision")->capture_default_str();
  run->add_option("--m", run_args.m, "Fixed number of RR sets per decision (overrides the formula)");
  run->add_option("--c", run_args.c, "UCB exploration scale, or 'auto'")->capture_default_str();
  run->add_option("--delta", cfg.settings.delta, "Confidence level for --c auto")->capture_default_str();
  run->add_option("--theta-norm", cfg.settings.theta_norm, "Assumed |theta| for --c auto")->capture_default_str();
  run->add_option("--d", cfg.settings.feature_dim, "Synthetic feature dimension")->capture_default_str();
  run->add_option("--prob-lo", cfg.prob.lo, "Lower end of sampled probabilities")->capture_default_str();
  run->add_option("--prob-hi", cfg.prob.hi, "Upper end of sampled probabilities")->capture_default_str();
  run->add_option("--r-min", cfg.r_min, "Smallest admissible node reward")->capture_default_str();
  run->add_option("--draw-mode", run_args.draw_mode, "matrix or streaming")->capture_default_str();
  run->add_option("--threads", cfg.settings.threads, "Worker threads (0: all cores)")->capture_default_str();
  std::string config_path;  // consumed by expand_config; listed for --help
  run->add_option("--config", config_path, "File of 'key = value' lines; command-line flags win");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the exhaustive verification suites");
  verify->add_option("--suite", verify_args.suite, "theorem1, theorem3, lemmas, order, tail or all")
      ->capture_default_str();
  verify->add_option("--max-nodes", verify_args.max_nodes, "Largest random instance");
  verify->add_option("--trials", verify_args.trials, "Trials or instances per suite");
  verify->add_option("--seed", verify_args.seed, "Seed")->capture_default_str();
  verify->add_option("--out", verify_args.out, "JSON report path (default stdout)");
  verify->add_option("--graph", verify_args.graph, "Graph for the tail suite (default: 64-node ring, p = 0.5)");

  std::string stats_graph;
  aimi::ProbabilityRange stats_prob{0.0, 0.1};
  std::uint64_t stats_seed = 0;
  auto* stats = app.add_subcommand("stats", "Print p_max, d_max and the subcriticality flag");
  stats->add_option("--graph", stats_graph, "Edge list");
  stats->add_option("--prob-lo", stats_prob.lo)->capture_default_str();
  stats->add_option("--prob-hi", stats_prob.hi)->capture_default_str();
  stats->add_option("--seed", stats_seed)->capture_default_str();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Write a synthetic graph and node features");
  gen->add_option("--nodes", gen_args.nodes)->capture_default_str();
  gen->add_option("--arcs", gen_args.arcs)->capture_default_str();
  gen->add_option("--d", gen_args.d, "Feature dimension")->capture_default_str();
  gen->add_option("--seed", gen_args.seed)->capture_default_str();
  gen->add_option("--skew", gen_args.skew, "Out-degree skew exponent")->capture_default_str();
  gen->add_flag("--linear", gen_args.linear, "Probabilities follow the linear feature model");
  gen->add_option("--prob-lo", gen_args.prob.lo)->capture_default_str();
  gen->add_option("--prob-hi", gen_args.prob.hi)->capture_default_str();
  gen->add_option("--out", gen_args.out, "Edge list output");
  gen->add_option("--features-out", gen_args.features_out, "Node feature output");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (*run) return do_run(run_args);
    if (*verify) return do_verify(verify_args);
    if (*stats) return do_stats(stats_graph, stats_prob, stats_seed);
    if (*gen) return do_gen(gen_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
