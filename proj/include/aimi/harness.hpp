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

// Experiment runner: policies x replications of adaptive seeding, with
// per-round reward curves.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aimi/diffusion.hpp"
#include "aimi/error.hpp"
#include "aimi/graph.hpp"
#include "aimi/learning.hpp"
#include "aimi/policies.hpp"
#include "aimi/rng.hpp"
#include "aimi/rr.hpp"

namespace aimi {

enum class DrawMode { kMatrix, kStreaming };

inline std::optional<DrawMode> parse_draw_mode(std::string_view s) {
  if (s == "matrix") return DrawMode::kMatrix;
  if (s == "streaming") return DrawMode::kStreaming;
  return std::nullopt;
}

/// Everything except the input files.
struct ExperimentSettings {
  std::vector<PolicyKind> policies;
  std::optional<std::size_t> rounds;  // default floor(|V| / 2)
  std::size_t reps = 10;
  std::uint64_t master_seed = 0;
  GreedyParams greedy;
  std::optional<double> c = 1.0;  // nullopt: recommended_c(delta, theta_norm)
  double delta = 0.1;
  double theta_norm = 1.0;
  std::size_t feature_dim = 5;
  DrawMode draw_mode = DrawMode::kMatrix;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (policies.empty()) throw ValidationError("no policies selected");
    if (reps < 1) throw ValidationError("reps must be >= 1");
    if (rounds && *rounds < 1) throw ValidationError("rounds must be >= 1");
    if (feature_dim < 1) throw ValidationError("feature dimension must be >= 1");
    if (c && !(*c >= 0.0)) throw ValidationError("c must be >= 0");
    greedy.validate();
  }
};

/// File-level configuration, as read from the command line.
struct ExperimentConfig {
  std::string graph_path;
  std::string features_path;
  std::string rewards_path;
  std::string out_path;
  ProbabilityRange prob{0.0, 0.1};
  double r_min = 0.01;
  ExperimentSettings settings;
};

/// A loaded graph with ground-truth probabilities and edge features.
struct ExperimentInput {
  DiGraph graph;
  std::optional<EdgeFeatureTable> features;
};

/// Loads files. Missing probabilities are drawn once per master seed, so
/// every policy and replication sees the same ground truth. Without a
/// feature file, node features are synthesised when grd_lf is requested.
inline ExperimentInput load_experiment_input(const ExperimentConfig& cfg) {
  if (cfg.graph_path.empty()) throw ValidationError("--graph is required");
  std::ifstream in(cfg.graph_path);
  if (!in) throw ValidationError("cannot open graph file " + cfg.graph_path);
  Rng prob_rng(hash64({cfg.settings.master_seed, 0x70726f62ULL}));
  ExperimentInput input{load_edge_list(in, cfg.prob, prob_rng), std::nullopt};
  if (!cfg.rewards_path.empty()) {
    std::ifstream rin(cfg.rewards_path);
    if (!rin) throw ValidationError("cannot open reward file " + cfg.rewards_path);
    load_rewards(rin, input.graph, cfg.r_min);
  }
  if (!cfg.features_path.empty()) {
    std::ifstream fin(cfg.features_path);
    if (!fin) throw ValidationError("cannot open feature file " + cfg.features_path);
    input.features = derive_edge_features(input.graph, load_node_features(fin, input.graph));
  } else if (std::ranges::find(cfg.settings.policies, PolicyKind::kGreedyLinear) !=
             cfg.settings.policies.end()) {
    Rng feat_rng(hash64({cfg.settings.master_seed, 0x66656174ULL}));
    input.features = synth_node_features(input.graph, cfg.settings.feature_dim, feat_rng).edge_features;
  }
  return input;
}

struct ResultRow {
  PolicyKind policy;
  std::size_t rep;
  std::size_t round;
  std::string seed_label;  // empty after the policy stopped
  std::size_t new_activated;
  double cum_reward;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::size_t rounds = 0;
  std::size_t reps = 0;
  double c = 0.0;  // exploration scale used by grd_lf
};

inline std::size_t resolve_rounds(const ExperimentSettings& s, const DiGraph& g) {
  return s.rounds ? *s.rounds : std::max<std::size_t>(1, g.num_nodes() / 2);
}

inline double resolve_c(const ExperimentSettings& s, const ExperimentInput& input, std::size_t rounds) {
  if (s.c) return *s.c;
  const std::size_t d = input.features ? input.features->dim() : s.feature_dim;
  return recommended_c(d, rounds, input.graph.num_arcs(), s.delta, s.theta_norm);
}

/// The stream contract: one stream per (master seed, policy, replication).
inline std::uint64_t cell_stream(std::uint64_t master_seed, PolicyKind policy, std::size_t rep) {
  return hash64({master_seed, static_cast<std::uint64_t>(policy), rep});
}

inline std::unique_ptr<Policy> make_policy(PolicyKind kind, const ExperimentInput& input,
                                           const ExperimentSettings& s, double c) {
  const DiGraph& g = input.graph;
  switch (kind) {
    case PolicyKind::kRandom: return std::make_unique<RandomPolicy>();
    case PolicyKind::kBiggestDegree: return std::make_unique<BiggestDegreePolicy>();
    case PolicyKind::kGreedyKnown:
      return std::make_unique<KnownGreedyPolicy>(
          std::vector<double>(g.probabilities().begin(), g.probabilities().end()), s.greedy);
    case PolicyKind::kGreedyLinear:
      if (!input.features) throw ValidationError("grd_lf needs edge features");
      return std::make_unique<UcbAimiPolicy>(*input.features, c, s.greedy);
    case PolicyKind::kGreedyCucb: return std::make_unique<CucbPolicy>(g.num_arcs(), s.greedy);
  }
  throw ValidationError("unknown policy");
}

/// One (policy, replication) cell: fresh history, fresh policy state.
inline std::vector<ResultRow> run_cell(const ExperimentInput& input, const ExperimentSettings& s,
                                       PolicyKind kind, std::size_t rep, std::size_t rounds, double c) {
  const DiGraph& g = input.graph;
  const std::uint64_t stream = cell_stream(s.master_seed, kind, rep);
  Rng policy_rng(hash64({stream, 1}));
  const std::uint64_t draw_key = hash64({stream, 2});
  auto policy = make_policy(kind, input, s, c);
  ObservedHistory history(g, rounds);

  std::optional<RealizationMatrix> matrix;
  if (s.draw_mode == DrawMode::kMatrix) {
    Rng matrix_rng(draw_key);
    matrix = RealizationMatrix::sample(g, rounds, matrix_rng);
  }
  const StreamingDraws streaming(draw_key, g.probabilities());

  std::vector<ResultRow> rows;
  rows.reserve(rounds);
  bool stopped = false;
  for (std::size_t t = 1; t <= rounds; ++t) {
    std::optional<NodeId> seed;
    if (!stopped) seed = policy->next_seed(history, t, policy_rng);
    if (!seed) {
      stopped = true;
      rows.push_back({kind, rep, t, "", 0, history.reward()});
      continue;
    }
    const RoundFeedback& fb = matrix ? history.run_round(*seed, MatrixDraws(*matrix))
                                     : history.run_round(*seed, streaming);
    policy->observe(fb);
    rows.push_back({kind, rep, t, g.label(*seed), fb.newly_activated.size(), history.reward()});
  }
  return rows;
}

/// Runs every (policy, replication) cell, in parallel when allowed. Rows
/// come back ordered by (policy list order, rep, round) regardless of
/// scheduling.
inline ResultTable run_experiment(const ExperimentInput& input, const ExperimentSettings& s) {
  s.validate();
  if (input.graph.empty()) throw ValidationError("graph has no nodes");
  ResultTable table;
  table.rounds = resolve_rounds(s, input.graph);
  table.reps = s.reps;
  table.c = resolve_c(s, input, table.rounds);

  struct Cell {
    PolicyKind kind;
    std::size_t rep;
  };
  std::vector<Cell> cells;
  for (PolicyKind k : s.policies)
    for (std::size_t r = 0; r < s.reps; ++r) cells.push_back({k, r});
  std::vector<std::vector<ResultRow>> out(cells.size());

  std::size_t workers = s.threads ? s.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < cells.size(); i = next++)
        out[i] = run_cell(input, s, cells[i].kind, cells[i].rep, table.rounds, table.c);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  for (auto& rows : out) table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  return table;
}

inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(load_experiment_input(cfg), cfg.settings);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

inline std::string format_real(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

}  // namespace detail

inline void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << "policy,rep,round,seed,new_activated,cum_reward\r\n";
  for (const auto& r : table.rows)
    out << policy_id(r.policy) << ',' << r.rep << ',' << r.round << ',' << detail::csv_field(r.seed_label)
        << ',' << r.new_activated << ',' << detail::format_real(r.cum_reward) << "\r\n";
}

struct AggregateRow {
  PolicyKind policy;
  std::size_t round;
  std::size_t reps;
  double mean;
  double std;  // sample standard deviation; 0 for a single replication
};

/// Per-policy, per-round mean and standard deviation of cumulative reward.
inline std::vector<AggregateRow> aggregate(const ResultTable& table) {
  std::map<std::pair<int, std::size_t>, std::vector<double>> cells;
  std::vector<PolicyKind> order;
  for (const auto& r : table.rows) {
    if (std::ranges::find(order, r.policy) == order.end()) order.push_back(r.policy);
    cells[{static_cast<int>(r.policy), r.round}].push_back(r.cum_reward);
  }
  std::vector<AggregateRow> out;
  for (PolicyKind k : order) {
    for (const auto& [key, values] : cells) {
      if (key.first != static_cast<int>(k)) continue;
      const double n = static_cast<double>(values.size());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      out.push_back({k, key.second, values.size(), mean, sd});
    }
  }
  return out;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "policy,round,reps,mean_cum_reward,std_cum_reward\r\n";
  for (const auto& r : rows)
    out << policy_id(r.policy) << ',' << r.round << ',' << r.reps << ',' << detail::format_real(r.mean)
        << ',' << detail::format_real(r.std) << "\r\n";
}

/// Final cumulative reward of each replication, per policy.
inline std::map<PolicyKind, std::vector<double>> final_rewards(const ResultTable& table) {
  std::map<PolicyKind, std::vector<double>> out;
  for (const auto& r : table.rows)
    if (r.round == table.rounds) out[r.policy].push_back(r.cum_reward);
  return out;
}

}  // namespace aimi
