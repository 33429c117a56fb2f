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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "aimi/harness.hpp"
#include "aimi/learning.hpp"
#include "aimi/verify.hpp"

namespace {

using namespace aimi;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

DiGraph graph_of(std::size_t n, std::initializer_list<std::tuple<NodeId, NodeId, double>> arcs) {
  DiGraph g;
  g.add_nodes(n);
  for (const auto& [u, v, p] : arcs) g.add_arc(u, v, p);
  return g;
}

Outcome theorem1() {
  const auto t0 = Clock::now();
  const auto r = check_theorem1(TheoremOneConfig{}, 1);
  const double secs = seconds_since(t0);
  return {r.passed() && r.instances == 1000 && secs < 60.0,
          fmt("%.0f trials, %.0f violations, %.0f strict, %.1f s", double(r.instances),
              double(r.violations.size()), r.summary["strict"].get<double>(), secs)};
}

Outcome theorem3() {
  const auto t0 = Clock::now();
  Rng rng(2);
  const double bound = 1.0 - std::exp(-1.0);
  double worst = 1.0;
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    const auto r = greedy_ratio(random_tiny_instance(rng, {2, 5, 6, 2, 2}));
    worst = std::min(worst, r.ratio());
    ok = ok && r.greedy >= bound * r.optimal - 1e-9;
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 120.0, fmt("min ratio %.6f vs bound %.6f, %.1f s", worst, bound, secs)};
}

Outcome lemmas() {
  Rng rng(3);
  std::size_t violations = 0, histories = 0;
  for (int i = 0; i < 50; ++i) {
    const auto r = check_lemmas_1_2(random_tiny_instance(rng, {2, 5, 6, 2, 2}));
    violations += r.violations.size();
    histories += r.summary["histories"].get<std::size_t>();
  }
  return {violations == 0, fmt("%.0f histories, %.0f violations", double(histories), double(violations))};
}

Outcome unbiasedness() {
  const DiGraph g = graph_of(4, {{0, 1, 0.6}, {1, 2, 0.5}, {2, 3, 0.4}, {0, 3, 0.2}, {3, 1, 0.7}});
  const std::size_t m = 10000, batches = 100;
  Rng rng(4);
  bool ok = true;
  double worst = 0.0;
  auto check = [&](const ObservedHistory& h) {
    std::vector<double> sum(4, 0.0), sq(4, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
      const auto est = estimate_marginals(h, g.probabilities(), m, rng);
      for (NodeId v = 0; v < 4; ++v) {
        sum[v] += est[v];
        sq[v] += est[v] * est[v];
      }
    }
    for (NodeId v = 0; v < 4; ++v) {
      const double mean = sum[v] / batches;
      const double sd = std::sqrt(std::max(0.0, (sq[v] - batches * mean * mean) / (batches - 1)));
      const double exact = brute_delta(h, v);
      const double tol = 3.0 * sd / std::sqrt(double(batches));
      worst = std::max(worst, std::abs(mean - exact) / std::max(tol, 1e-300));
      ok = ok && std::abs(mean - exact) <= tol;
    }
  };
  check(ObservedHistory(g, 2));
  // A history after one round, so the live view has lost arcs.
  RealizationMatrix M(g.num_arcs(), 2);
  M.set(0, 0, true);
  M.set(4, 0, true);
  const std::vector<NodeId> seq{0};
  check(replay(g, seq, M).history);
  return {ok, fmt("largest |mean - exact| / (3 sd / sqrt(batches)) = %.3f", worst)};
}

Outcome cover_identity() {
  const std::vector<DiGraph> graphs{
      graph_of(3, {{0, 1, 0.5}, {1, 2, 0.5}}),
      graph_of(4, {{0, 1, 0.3}, {0, 2, 0.6}, {1, 3, 0.5}, {2, 3, 0.4}}),
      graph_of(4, {{0, 1, 0.7}, {1, 2, 0.4}, {2, 0, 0.5}, {2, 3, 0.8}, {3, 1, 0.2}}),
  };
  const std::size_t samples = 100000;
  Rng rng(5);
  bool ok = true;
  double worst = 0.0;
  for (const DiGraph& g : graphs) {
    const LiveGraphView view(g);
    RrSampler sampler(view, g.probabilities());
    for (NodeId target = 0; target < g.num_nodes(); ++target) {
      std::vector<double> hits(g.num_nodes(), 0.0);
      const std::vector<NodeId> targets{target};
      for (std::size_t i = 0; i < samples; ++i) sampler.sample(targets, rng, [&](NodeId v) { hits[v] += 1; });
      for (NodeId s = 0; s < g.num_nodes(); ++s) {
        // Enumerated sums can land a rounding step above 1.
        const double p = std::clamp(activation_probabilities(g, s)[target], 0.0, 1.0);
        const double sigma = std::sqrt(p * (1 - p) / samples);
        const double dev = std::abs(hits[s] / samples - p);
        if (sigma > 0) worst = std::max(worst, dev / sigma);
        ok = ok && dev <= 3 * sigma + 1e-15;
      }
    }
  }
  return {ok, fmt("largest deviation %.2f sigma", worst)};
}

Outcome optimism() {
  Rng graph_rng(6);
  const DiGraph base = generate_digraph(100, 900, graph_rng);
  Rng feat_rng(7);
  const auto model = synth_node_features(base, 5, feat_rng);
  DiGraph g = base;
  g.set_probabilities(model.probabilities);
  double theta_norm = 0.0;
  for (double t : model.theta) theta_norm += t * t;
  theta_norm = std::sqrt(theta_norm);
  const std::size_t horizon = 50, runs = 200;
  const double c = recommended_c(5, horizon, g.num_arcs(), 0.1, theta_norm);
  GreedyParams params;
  params.m_override = 200;
  std::size_t failures = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    UcbAimiPolicy policy(model.edge_features, c, params);
    ObservedHistory h(g, horizon);
    Rng rng(hash64({8, run}));
    const StreamingDraws draws(hash64({9, run}), g.probabilities());
    bool failed = false;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto seed = policy.next_seed(h, t, rng);
      if (!seed) break;
      const auto& fb = h.run_round(*seed, draws);
      for (const auto& obs : fb.observed)
        if (policy.last_ucb()[obs.arc] < g.probability(obs.arc)) failed = true;
      policy.observe(fb);
    }
    failures += failed ? 1 : 0;
  }
  const double freq = double(failures) / runs;
  const double limit = 0.1 + 3 * std::sqrt(0.1 * 0.9 / runs);
  return {freq <= limit, fmt("c = %.3f, failure frequency %.3f (limit %.3f)", c, freq, limit)};
}

Outcome cascade_tail_criterion() {
  DiGraph ring;
  ring.add_nodes(64);
  for (NodeId v = 0; v < 64; ++v) ring.add_arc(v, (v + 1) % 64, 0.5);
  const std::size_t reps = 100000;
  Rng rng(10);
  const auto t = cascade_tail(ring, ring.probabilities(), reps, rng);
  bool ok = true;
  for (int level = 1; level <= 10; ++level) {
    const double p = std::ldexp(1.0, -level);
    ok = ok && std::abs(t.survival[level - 1] - p) <= 3 * std::sqrt(p * (1 - p) / reps);
  }
  // 200 nodes, out-degree 8, p = 0.1: p_max * d_max = 0.8.
  Rng grng(11);
  DiGraph g;
  g.add_nodes(200);
  for (NodeId u = 0; u < 200; ++u) {
    std::size_t k = 0;
    while (k < 8) {
      const auto v = static_cast<NodeId>(grng.below(200));
      if (v == u || g.find_arc(u, v)) continue;
      g.add_arc(u, v, 0.1);
      ++k;
    }
  }
  const auto r = cascade_tail_check(g, g.probabilities(), reps, 12);
  const double slope = r.summary["slope"].get<double>();
  std::ostringstream os;
  os << "ring survival within 3 sigma for L <= 10: " << (ok ? "yes" : "no") << "; random instance criticality "
     << r.summary["criticality"].get<double>() << ", fitted slope " << slope;
  return {ok && r.passed() && slope < 0.0, os.str()};
}

struct Stat {
  double mean = 0, sd = 0;
  std::size_t n = 0;
};

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  s.n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= double(s.n);
  for (double x : xs) s.sd += (x - s.mean) * (x - s.mean);
  s.sd = s.n > 1 ? std::sqrt(s.sd / double(s.n - 1)) : 0.0;
  return s;
}

double pooled_se(const Stat& a, const Stat& b) {
  return std::sqrt(a.sd * a.sd / double(a.n) + b.sd * b.sd / double(b.n));
}

Outcome oracle_ordering() {
  const auto t0 = Clock::now();
  Rng graph_rng(11);
  ExperimentInput in{generate_digraph(100, 900, graph_rng, {0.0, 0.1}), std::nullopt};
  Rng feat_rng(12);
  const auto model = synth_node_features(in.graph, 5, feat_rng);
  in.features = model.edge_features;
  ExperimentSettings s;
  s.policies = {PolicyKind::kGreedyKnown, PolicyKind::kGreedyLinear, PolicyKind::kRandom};
  s.rounds = 50;
  s.reps = 10;
  s.master_seed = 5;
  auto finals = final_rewards(run_experiment(in, s));
  const Stat kw = stat_of(finals[PolicyKind::kGreedyKnown]);
  const Stat lf = stat_of(finals[PolicyKind::kGreedyLinear]);
  const Stat rd = stat_of(finals[PolicyKind::kRandom]);
  const bool order = kw.mean - lf.mean > pooled_se(kw, lf) && lf.mean - rd.mean > pooled_se(lf, rd);

  ExperimentInput linear = in;
  linear.graph.set_probabilities(model.probabilities);
  s.policies = {PolicyKind::kGreedyKnown, PolicyKind::kGreedyLinear};
  finals = final_rewards(run_experiment(linear, s));
  const Stat wkw = stat_of(finals[PolicyKind::kGreedyKnown]);
  const Stat wlf = stat_of(finals[PolicyKind::kGreedyLinear]);
  const double ratio = wlf.mean / wkw.mean;
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os.precision(4);
  os << "kw " << kw.mean << " (" << kw.sd << "), lf " << lf.mean << " (" << lf.sd << "), rdm " << rd.mean
     << " (" << rd.sd << "); well-specified lf/kw " << ratio << "; " << secs << " s";
  return {order && ratio >= 0.8 && secs < 600.0, os.str()};
}

Outcome cucb_warm_start() {
  Rng graph_rng(11);
  const DiGraph g = generate_digraph(100, 900, graph_rng);
  CucbPolicy p(g.num_arcs(), GreedyParams{});
  bool ok = true;
  for (double u : p.estimates(1)) ok = ok && u == 1.0;
  return {ok, fmt("%.0f arcs start at 1", double(g.num_arcs()))};
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("aimi_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  Rng rng(13);
  {
    std::ofstream out(dir / "g.txt");
    write_edge_list(out, generate_digraph(40, 200, rng));
  }
  const std::string base = std::string(AIMI_CLI) + " run --graph " + (dir / "g.txt").string() +
                           " --policies rdm,bgg_dgr,grd_kw,grd_lf,grd_lnf --rounds 10 --reps 4 --m 2000 --seed 99";
  bool ok = true;
  for (const std::string mode : {"matrix", "streaming"}) {
    std::vector<std::string> outputs;
    for (const std::string threads : {"4", "4", "1"}) {
      const fs::path out = dir / ("r" + std::to_string(outputs.size()) + ".csv");
      ok = ok && shell(base + " --draw-mode " + mode + " --threads " + threads + " --out " + out.string() +
                       " 2>/dev/null") == 0;
      outputs.push_back(slurp(out));
    }
    ok = ok && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  }
  fs::remove_all(dir);
  return {ok, "matrix and streaming draws, 4 threads twice and 1 thread"};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<bool> selected(11, argc <= 1);
  for (int i = 1; i < argc; ++i) selected.at(static_cast<std::size_t>(std::atoi(argv[i]))) = true;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sample-path dominance", theorem1},
      {"greedy approximation ratio", theorem3},
      {"marginal gain nonnegative and diminishing", lemmas},
      {"RR estimator unbiased", unbiasedness},
      {"RR membership equals activation probability", cover_identity},
      {"UCB optimism", optimism},
      {"cascade size tail", cascade_tail_criterion},
      {"oracle ordering", oracle_ordering},
      {"CUCB warm start", cucb_warm_start},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i + 1]) continue;
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
