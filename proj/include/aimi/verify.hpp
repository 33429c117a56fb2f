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

// Exhaustive and statistical checks of the model's structural guarantees on
// small instances.
//
// Two exact routes are provided. brute_delta enumerates every realization
// matrix and filters by consistency with the history. The faster route,
// enumerate_round, branches lazily on each arc outcome the next round
// actually observes; unobserved entries marginalise out. The checks use the
// lazy route and the tests pin it to brute_delta.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aimi/diffusion.hpp"
#include "aimi/error.hpp"
#include "aimi/graph.hpp"
#include "aimi/rng.hpp"

namespace aimi {

/// A graph small enough to enumerate, with its horizon.
struct TinyInstance {
  DiGraph graph;
  std::size_t horizon = 2;
};

struct TinyLimits {
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 5;
  std::size_t max_arcs = 6;
  std::size_t min_horizon = 2;
  std::size_t max_horizon = 2;
};

/// Random instance: probabilities mix certain arcs, coin flips and
/// U(0.05, 0.95); rewards mix 1 and U(0.1, 1).
inline TinyInstance random_tiny_instance(Rng& rng, const TinyLimits& lim) {
  TinyInstance inst;
  const std::size_t n = lim.min_nodes + rng.below(lim.max_nodes - lim.min_nodes + 1);
  inst.graph.add_nodes(n);
  const std::size_t cap = std::min(lim.max_arcs, n * (n - 1));
  const std::size_t arcs = 1 + rng.below(cap);
  while (inst.graph.num_arcs() < arcs) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u == v || inst.graph.find_arc(u, v)) continue;
    const auto kind = rng.below(4);
    const double p = kind == 0 ? 1.0 : kind == 1 ? 0.5 : rng.uniform(0.05, 0.95);
    inst.graph.add_arc(u, v, p);
  }
  for (NodeId v = 0; v < n; ++v)
    if (rng.below(3) == 0) inst.graph.set_reward(v, rng.uniform(0.1, 1.0));
  inst.horizon = lim.min_horizon + rng.below(lim.max_horizon - lim.min_horizon + 1);
  return inst;
}

/// Same instance with node v renamed perm[v]; arcs keep their order.
inline TinyInstance permute_instance(const TinyInstance& inst, std::span<const NodeId> perm) {
  const DiGraph& g = inst.graph;
  std::vector<NodeId> inverse(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) inverse[perm[v]] = v;
  TinyInstance out;
  out.horizon = inst.horizon;
  out.graph.add_nodes(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) out.graph.set_reward(perm[v], g.reward(v));
  for (ArcId e = 0; e < g.num_arcs(); ++e)
    out.graph.add_arc(perm[g.arc(e).origin], perm[g.arc(e).target], g.probability(e));
  return out;
}

inline nlohmann::json instance_json(const TinyInstance& inst) {
  const DiGraph& g = inst.graph;
  nlohmann::json arcs = nlohmann::json::array();
  for (ArcId e = 0; e < g.num_arcs(); ++e)
    arcs.push_back({g.arc(e).origin, g.arc(e).target, g.probability(e)});
  std::vector<double> rewards(g.rewards().begin(), g.rewards().end());
  return {{"nodes", g.num_nodes()}, {"arcs", arcs}, {"rewards", rewards}, {"horizon", inst.horizon}};
}

// ---------------------------------------------------------------------------
// Lazy outcome enumeration

namespace detail {

struct NeedMoreDraws {};

/// Answers draws from a fixed script and records which arcs were asked.
class ScriptedDraws {
 public:
  explicit ScriptedDraws(const std::vector<bool>& script) : script_(&script) {}

  bool draw(ArcId e, std::size_t) const {
    if (next_ >= script_->size()) throw NeedMoreDraws{};
    arcs_.push_back(e);
    return (*script_)[next_++];
  }

  const std::vector<ArcId>& arcs() const { return arcs_; }

 private:
  const std::vector<bool>* script_;
  mutable std::size_t next_ = 0;
  mutable std::vector<ArcId> arcs_;
};

template <typename Visit>
void enumerate_round_impl(const ObservedHistory& h, NodeId seed, std::span<const double> w,
                          std::vector<bool>& script, Visit& visit) {
  ObservedHistory next = h;
  const ScriptedDraws draws(script);
  try {
    next.run_round(seed, draws);
  } catch (const NeedMoreDraws&) {
    for (bool b : {false, true}) {
      script.push_back(b);
      enumerate_round_impl(h, seed, w, script, visit);
      script.pop_back();
    }
    return;
  }
  double p = 1.0;
  for (std::size_t i = 0; i < script.size(); ++i) p *= script[i] ? w[draws.arcs()[i]] : 1.0 - w[draws.arcs()[i]];
  if (p > 0.0) visit(p, std::move(next));
}

}  // namespace detail

/// Calls visit(probability, next_history) for every positive-probability
/// outcome of seeding `seed` after `h`, with arc probabilities `w`.
template <typename Visit>
void enumerate_round(const ObservedHistory& h, NodeId seed, std::span<const double> w,
                     Visit&& visit) {
  std::vector<bool> script;
  detail::enumerate_round_impl(h, seed, w, script, visit);
}

template <typename Visit>
void enumerate_round(const ObservedHistory& h, NodeId seed, Visit&& visit) {
  enumerate_round(h, seed, h.graph().probabilities(), std::forward<Visit>(visit));
}

/// Exact Delta(v | h) under the graph's probabilities.
inline double exact_delta(const ObservedHistory& h, NodeId v) {
  const double base = h.reward();
  double gain = 0.0;
  enumerate_round(h, v, [&](double p, ObservedHistory&& next) { gain += p * (next.reward() - base); });
  return gain;
}

inline std::vector<double> exact_deltas(const ObservedHistory& h) {
  std::vector<double> d(h.graph().num_nodes());
  for (NodeId v = 0; v < d.size(); ++v) d[v] = exact_delta(h, v);
  return d;
}

/// Exact probability that each node is activated in a single round seeded
/// at `seed` on the pristine graph.
inline std::vector<double> activation_probabilities(const DiGraph& g, NodeId seed) {
  std::vector<double> prob(g.num_nodes(), 0.0);
  const ObservedHistory fresh(g, 1);
  enumerate_round(fresh, seed, [&](double p, ObservedHistory&& next) {
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (next.activated(v)) prob[v] += p;
  });
  return prob;
}

/// Exact f_avg of a fixed (non-adaptive) seeding sequence.
inline double expected_sequence_value(const DiGraph& g, std::span<const NodeId> sequence) {
  std::function<double(const ObservedHistory&, std::size_t)> rec =
      [&](const ObservedHistory& h, std::size_t i) -> double {
    if (i == sequence.size()) return h.reward();
    double value = 0.0;
    enumerate_round(h, sequence[i],
                    [&](double p, ObservedHistory&& next) { value += p * rec(next, i + 1); });
    return value;
  };
  return rec(ObservedHistory(g, std::max<std::size_t>(sequence.size(), 1)), 0);
}

// ---------------------------------------------------------------------------
// Full matrix enumeration

struct EnumerationBudget {
  std::size_t max_matrix_bits = 22;
};

/// Delta(v | history) from its definition: average f(y@(v), M) - f(y, M)
/// over every matrix M consistent with the history, weighted by P_M and
/// renormalised by the consistent mass.
inline double brute_delta(const ObservedHistory& history, NodeId v,
                          EnumerationBudget budget = {}) {
  const DiGraph& g = history.graph();
  const std::size_t columns = history.partial().columns();
  const std::size_t bits = g.num_arcs() * columns;
  if (bits > budget.max_matrix_bits)
    throw BudgetError("enumeration needs 2^" + std::to_string(bits) + " matrices");
  std::vector<NodeId> extended = history.sequence();
  extended.push_back(v);
  RealizationMatrix m(g.num_arcs(), columns);
  double mass = 0.0;
  double gain = 0.0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    for (std::size_t i = 0; i < bits; ++i) m.set(static_cast<ArcId>(i / columns), i % columns, (code >> i) & 1);
    if (!is_consistent(m, history)) continue;
    const double p = m.probability(g.probabilities());
    if (p == 0.0) continue;
    const double before = replay(g, history.sequence(), m).value;
    const double after = replay(g, extended, m).value;
    mass += p;
    gain += p * (after - before);
  }
  if (mass == 0.0) throw ValidationError("history has zero probability");
  return gain / mass;
}

// ---------------------------------------------------------------------------
// Optimal and greedy policies by backward induction

struct PolicyTreeNode {
  std::optional<NodeId> action;  // nullopt: stop
  double value = 0.0;            // expected final reward from here
  struct Branch {
    double probability;
    std::unique_ptr<PolicyTreeNode> child;
  };
  std::vector<Branch> branches;
};

struct OptimalResult {
  double value = 0.0;
  std::unique_ptr<PolicyTreeNode> tree;
};

namespace detail {

inline std::unique_ptr<PolicyTreeNode> solve_optimal(const ObservedHistory& h, std::size_t left,
                                                     bool keep_tree) {
  auto node = std::make_unique<PolicyTreeNode>();
  node->value = h.reward();
  if (left == 0 || h.all_activated()) return node;
  const DiGraph& g = h.graph();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double value = 0.0;
    std::vector<PolicyTreeNode::Branch> branches;
    enumerate_round(h, v, [&](double p, ObservedHistory&& next) {
      auto child = solve_optimal(next, left - 1, keep_tree);
      value += p * child->value;
      if (keep_tree) branches.push_back({p, std::move(child)});
    });
    if (value > node->value + 1e-12) {
      node->value = value;
      node->action = v;
      node->branches = std::move(branches);
    }
  }
  return node;
}

}  // namespace detail

/// Exact optimum of f_avg over adaptive policies running at most
/// `instance.horizon` rounds.
inline OptimalResult brute_optimal(const TinyInstance& instance, bool keep_tree = false,
                                   EnumerationBudget budget = {}) {
  const DiGraph& g = instance.graph;
  if (g.num_arcs() * instance.horizon > budget.max_matrix_bits)
    throw BudgetError("instance too large for exact optimisation");
  OptimalResult r;
  r.tree = detail::solve_optimal(ObservedHistory(g, instance.horizon), instance.horizon, keep_tree);
  r.value = r.tree->value;
  if (!keep_tree) r.tree.reset();
  return r;
}

/// Exact f_avg of the exact greedy policy: argmax Delta, ties to the
/// smallest id, stopping when every Delta is zero.
inline double exact_greedy_value(const TinyInstance& instance) {
  std::function<double(const ObservedHistory&, std::size_t)> rec =
      [&](const ObservedHistory& h, std::size_t left) -> double {
    if (left == 0) return h.reward();
    const auto d = exact_deltas(h);
    const double best = *std::max_element(d.begin(), d.end());
    if (best <= 1e-15) return h.reward();
    NodeId pick = 0;
    while (d[pick] < best - 1e-12) ++pick;
    double value = 0.0;
    enumerate_round(h, pick, [&](double p, ObservedHistory&& next) { value += p * rec(next, left - 1); });
    return value;
  };
  return rec(ObservedHistory(instance.graph, instance.horizon), instance.horizon);
}

// ---------------------------------------------------------------------------
// Reports

struct CheckReport {
  std::string check;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::vector<nlohmann::json> violations;
  nlohmann::json summary = nlohmann::json::object();

  bool passed() const { return violations.empty(); }

  nlohmann::json to_json() const {
    return {{"check", check},
            {"instances", instances},
            {"violations", violations},
            {"seed", seed},
            {"passed", passed()},
            {"summary", summary}};
  }
};

// ---------------------------------------------------------------------------
// Sample-path dominance

/// A deterministic adaptive rule; std::nullopt stops.
using AdaptiveRule = std::function<std::optional<NodeId>(const ObservedHistory&)>;

/// Stable hash of the observable history (sequence and partial matrix).
inline std::uint64_t history_key(const ObservedHistory& h) {
  std::uint64_t k = hash64({h.sequence().size()});
  for (NodeId v : h.sequence()) k = hash64({k, v});
  const PartialMatrix& pm = h.partial();
  for (ArcId e = 0; e < pm.num_arcs(); ++e) {
    k = hash64({k, 0xFFFFu, pm.observed_count(e)});
    for (auto b : pm.row(e)) k = hash64({k, b});
  }
  return k;
}

/// A lazily materialised random lookup table over histories. Stops with
/// probability `stop_probability` at each history and always after
/// `horizon` rounds.
inline AdaptiveRule random_table_policy(std::uint64_t seed, std::size_t num_nodes,
                                        std::size_t horizon, double stop_probability) {
  return [=](const ObservedHistory& h) -> std::optional<NodeId> {
    if (h.num_rounds() >= horizon) return std::nullopt;
    const std::uint64_t k = history_key(h);
    if (to_unit(hash64({seed, k, 1})) < stop_probability) return std::nullopt;
    return static_cast<NodeId>(hash64({seed, k, 2}) % num_nodes);
  };
}

inline std::vector<NodeId> run_rule(const DiGraph& g, const RealizationMatrix& m,
                                    const AdaptiveRule& rule) {
  ObservedHistory h(g, m.columns());
  const MatrixDraws draws(m);
  while (auto v = rule(h)) h.run_round(*v, draws);
  return h.sequence();
}

struct DominanceOutcome {
  std::vector<NodeId> first;   // pi1(M)
  std::vector<NodeId> prefix;  // pi2(M)
  double alone = 0.0;          // f(pi1(M), M)
  double combined = 0.0;       // f(pi2(M) @ pi1(M), M)
  bool holds() const { return alone <= combined + 1e-12; }
};

inline DominanceOutcome theorem1_trial(const DiGraph& g, const RealizationMatrix& m,
                                       const AdaptiveRule& pi1, const AdaptiveRule& pi2) {
  DominanceOutcome out;
  out.first = run_rule(g, m, pi1);
  out.prefix = run_rule(g, m, pi2);
  std::vector<NodeId> both = out.prefix;
  both.insert(both.end(), out.first.begin(), out.first.end());
  out.alone = replay(g, out.first, m).value;
  out.combined = replay(g, both, m).value;
  return out;
}

struct TheoremOneConfig {
  std::size_t trials = 1000;
  TinyLimits limits{2, 6, 10, 1, 3};
  double stop_probability = 0.15;
};

/// f(pi1(M), M) <= f(pi2(M) @ pi1(M), M) on random instances, matrices with
/// 2T columns, and random table policies that stop within T rounds.
inline CheckReport check_theorem1(const TheoremOneConfig& cfg, std::uint64_t seed) {
  CheckReport report;
  report.check = "theorem1";
  report.seed = seed;
  Rng rng(seed);
  std::size_t strict = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const TinyInstance inst = random_tiny_instance(rng, cfg.limits);
    const DiGraph& g = inst.graph;
    const RealizationMatrix m = RealizationMatrix::sample(g, 2 * inst.horizon, rng);
    const auto pi1 = random_table_policy(rng(), g.num_nodes(), inst.horizon, cfg.stop_probability);
    const auto pi2 = random_table_policy(rng(), g.num_nodes(), inst.horizon, cfg.stop_probability);
    const auto out = theorem1_trial(g, m, pi1, pi2);
    ++report.instances;
    if (out.combined > out.alone + 1e-12) ++strict;
    if (!out.holds()) {
      nlohmann::json rows = nlohmann::json::array();
      for (ArcId e = 0; e < m.num_arcs(); ++e) {
        std::string row;
        for (std::size_t j = 0; j < m.columns(); ++j) row += m.bit(e, j) ? '1' : '0';
        rows.push_back(row);
      }
      report.violations.push_back({{"trial", trial},
                                   {"instance", instance_json(inst)},
                                   {"matrix", rows},
                                   {"pi1", out.first},
                                   {"pi2", out.prefix},
                                   {"f_pi1", out.alone},
                                   {"f_pi2_then_pi1", out.combined}});
    }
  }
  report.summary = {{"strict", strict}};
  return report;
}

// ---------------------------------------------------------------------------
// Marginal gain: nonnegativity and history monotonicity

/// Scans every positive-probability history of fewer than T rounds and
/// checks Delta >= 0 and Delta(v | ancestor) >= Delta(v | descendant).
inline CheckReport check_lemmas_1_2(const TinyInstance& instance, double tol = 1e-12) {
  CheckReport report;
  report.check = "lemmas";
  report.instances = 1;
  std::size_t histories = 0;
  std::size_t pairs = 0;
  std::vector<std::vector<double>> ancestors;
  std::function<void(const ObservedHistory&)> scan = [&](const ObservedHistory& h) {
    ++histories;
    const auto d = exact_deltas(h);
    for (NodeId v = 0; v < d.size(); ++v) {
      if (d[v] < -tol)
        report.violations.push_back({{"kind", "negative"}, {"sequence", h.sequence()}, {"node", v}, {"delta", d[v]}});
      if (h.all_activated() && std::abs(d[v]) > tol)
        report.violations.push_back({{"kind", "nonzero_when_saturated"}, {"sequence", h.sequence()}, {"node", v}, {"delta", d[v]}});
    }
    for (const auto& a : ancestors) {
      ++pairs;
      for (NodeId v = 0; v < d.size(); ++v)
        if (a[v] < d[v] - tol)
          report.violations.push_back({{"kind", "not_diminishing"}, {"sequence", h.sequence()}, {"node", v},
                                       {"ancestor_delta", a[v]}, {"delta", d[v]}});
    }
    if (h.num_rounds() + 1 >= instance.horizon) return;
    ancestors.push_back(d);
    for (NodeId s = 0; s < h.graph().num_nodes(); ++s)
      enumerate_round(h, s, [&](double, ObservedHistory&& next) { scan(next); });
    ancestors.pop_back();
  };
  scan(ObservedHistory(instance.graph, instance.horizon));
  report.summary = {{"histories", histories}, {"nested_pairs", pairs}};
  if (!report.passed()) report.summary["instance"] = instance_json(instance);
  return report;
}

// ---------------------------------------------------------------------------
// Greedy ratio

struct RatioOutcome {
  double greedy = 0.0;
  double optimal = 0.0;
  double ratio() const { return optimal > 0.0 ? greedy / optimal : 1.0; }
};

inline RatioOutcome greedy_ratio(const TinyInstance& instance) {
  return {exact_greedy_value(instance), brute_optimal(instance).value};
}

/// f_avg(greedy) >= (1 - e^{-beta/alpha}) f_avg(opt) with alpha = beta = 1.
inline CheckReport check_theorem3(const TinyInstance& instance, double alpha = 1.0,
                                  double beta = 1.0, double tol = 1e-9) {
  CheckReport report;
  report.check = "theorem3";
  report.instances = 1;
  const auto r = greedy_ratio(instance);
  const double bound = 1.0 - std::exp(-beta / alpha);
  report.summary = {{"greedy", r.greedy}, {"optimal", r.optimal}, {"ratio", r.ratio()}, {"bound", bound}};
  if (r.greedy < bound * r.optimal - tol)
    report.violations.push_back({{"instance", instance_json(instance)}, {"greedy", r.greedy}, {"optimal", r.optimal}});
  return report;
}

// ---------------------------------------------------------------------------
// Seeding-order sensitivity

struct OrderGap {
  NodeId first;
  NodeId second;
  double forward;   // f_avg((first, second))
  double backward;  // f_avg((second, first))
  double gap() const { return forward - backward; }
};

inline OrderGap order_gap(const DiGraph& g, NodeId a, NodeId b) {
  const std::vector<NodeId> ab{a, b};
  const std::vector<NodeId> ba{b, a};
  return {a, b, expected_sequence_value(g, ab), expected_sequence_value(g, ba)};
}

/// Searches random tiny instances for length-2 sequences whose value
/// depends on the order; reports every instance found and the largest gap.
inline CheckReport order_sensitivity_search(std::size_t trials, std::uint64_t seed,
                                            TinyLimits limits = {3, 5, 6, 2, 2},
                                            std::size_t max_reported = 20) {
  CheckReport report;
  report.check = "order";
  report.seed = seed;
  Rng rng(seed);
  std::size_t found = 0;
  double max_gap = 0.0;
  nlohmann::json examples = nlohmann::json::array();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const TinyInstance inst = random_tiny_instance(rng, limits);
    const std::size_t n = inst.graph.num_nodes();
    const auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n - 1));
    if (b >= a) ++b;
    const OrderGap og = order_gap(inst.graph, a, b);
    ++report.instances;
    if (std::abs(og.gap()) > 1e-12) {
      ++found;
      if (std::abs(og.gap()) > max_gap) max_gap = std::abs(og.gap());
      if (examples.size() < max_reported)
        examples.push_back({{"instance", instance_json(inst)}, {"first", a}, {"second", b},
                            {"forward", og.forward}, {"backward", og.backward}, {"gap", og.gap()}});
    }
  }
  report.summary = {{"order_sensitive", found}, {"max_gap", max_gap}, {"examples", examples}};
  return report;
}

// ---------------------------------------------------------------------------
// Cascade size tail

/// Draws straight from an Rng; for single-round simulation only.
class RngDraws {
 public:
  RngDraws(std::span<const double> w, Rng& rng) : w_(w), rng_(&rng) {}
  bool draw(ArcId e, std::size_t) const { return rng_->bernoulli(w_[e]); }

 private:
  std::span<const double> w_;
  Rng* rng_;
};

struct TailEstimate {
  std::size_t reps = 0;
  std::vector<double> survival;  // survival[L-1] = P(size > L)
  double slope = 0.0;            // least-squares slope of log survival
  bool non_increasing = true;
};

/// Round sizes (seed included) from uniformly random seeds on the pristine
/// graph. The slope uses levels with at least `min_count` exceedances.
inline TailEstimate cascade_tail(const DiGraph& g, std::span<const double> w, std::size_t reps,
                                 Rng& rng, std::size_t max_level = 64, std::size_t min_count = 10) {
  if (g.empty()) throw ValidationError("empty graph");
  std::vector<std::size_t> exceed(max_level + 1, 0);
  const RngDraws draws(w, rng);
  for (std::size_t r = 0; r < reps; ++r) {
    ObservedHistory h(g, 1);
    const auto seed = static_cast<NodeId>(rng.below(g.num_nodes()));
    const std::size_t size = h.run_round(seed, draws).newly_activated.size();
    for (std::size_t level = 1; level <= max_level && level < size; ++level) ++exceed[level];
  }
  TailEstimate t;
  t.reps = reps;
  for (std::size_t level = 1; level <= max_level; ++level)
    t.survival.push_back(static_cast<double>(exceed[level]) / static_cast<double>(reps));
  for (std::size_t i = 1; i < t.survival.size(); ++i)
    if (t.survival[i] > t.survival[i - 1]) t.non_increasing = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (std::size_t level = 1; level <= max_level; ++level) {
    if (exceed[level] < min_count) break;
    const double x = static_cast<double>(level);
    const double y = std::log(t.survival[level - 1]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; k += 1;
  }
  t.slope = k >= 2 ? (k * sxy - sx * sy) / (k * sxx - sx * sx) : 0.0;
  return t;
}

/// Refuses graphs that violate p_max * d_max < 1.
inline CheckReport cascade_tail_check(const DiGraph& g, std::span<const double> w,
                                      std::size_t reps, std::uint64_t seed) {
  DiGraph probe = g;
  probe.set_probabilities(w);
  const GraphStats stats = graph_stats(probe);
  if (!stats.subcritical)
    throw ValidationError("cascade tail check requires p_max * d_max < 1 (got " +
                          DiGraph::format_double(stats.criticality()) + ")");
  Rng rng(seed);
  const TailEstimate t = cascade_tail(g, w, reps, rng);
  CheckReport report;
  report.check = "cascade_tail";
  report.seed = seed;
  report.instances = 1;
  std::vector<double> head(t.survival.begin(), t.survival.begin() + std::min<std::size_t>(16, t.survival.size()));
  report.summary = {{"reps", reps}, {"criticality", stats.criticality()}, {"slope", t.slope}, {"survival", head}};
  if (!t.non_increasing) report.violations.push_back({{"kind", "survival_increases"}});
  const bool any_spread = !t.survival.empty() && t.survival[0] > 0.0;
  if (any_spread && !(t.slope < 0.0)) report.violations.push_back({{"kind", "non_negative_slope"}, {"slope", t.slope}});
  return report;
}

}  // namespace aimi
