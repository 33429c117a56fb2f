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

// Reverse-reachable (RR) set sampling and the RR-based approximate greedy
// seed selector.
//
// For a history with activated set I, a random RR set targets a node drawn
// uniformly from V \ I and contains every node that reaches it in a random
// subgraph of the live graph, keeping each arc e with probability w(e). The
// reward-weighted membership frequency of s, scaled by |V \ I|, is an
// unbiased estimate of the expected marginal gain of seeding s.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <vector>

#include "aimi/diffusion.hpp"
#include "aimi/error.hpp"
#include "aimi/graph.hpp"
#include "aimi/rng.hpp"

namespace aimi {

struct RrSet {
  NodeId target = 0;
  std::vector<NodeId> members;  // target first, then in discovery order
};

struct GreedyParams {
  double alpha = 1.1;
  double beta = 0.9;
  std::optional<std::size_t> m_cap = 200000;
  std::optional<std::size_t> m_override;

  void validate() const {
    if (!(alpha > 1.0)) throw ValidationError("greedy alpha must be > 1");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("greedy beta must lie in (0, 1)");
    if (m_cap && *m_cap == 0) throw ValidationError("m_cap must be positive");
    if (m_override && *m_override == 0) throw ValidationError("m_override must be positive");
  }
};

/// ceil(2 a^2 n^2 log(3 / (1 - b)) / ((a - 1)^2 r_max^2)).
inline std::size_t greedy_sample_count(double alpha, double beta, std::size_t n, double r_max) {
  const double nn = static_cast<double>(n);
  const double m = 2.0 * alpha * alpha * nn * nn * std::log(3.0 / (1.0 - beta)) /
                   ((alpha - 1.0) * (alpha - 1.0) * r_max * r_max);
  return static_cast<std::size_t>(std::ceil(m));
}

struct SampleCount {
  std::size_t m = 0;
  std::size_t formula = 0;
  bool clamped = false;
};

inline SampleCount resolve_sample_count(const GreedyParams& params, std::size_t n, double r_max) {
  params.validate();
  SampleCount sc;
  sc.formula = greedy_sample_count(params.alpha, params.beta, n, r_max);
  sc.m = sc.formula;
  if (params.m_cap && sc.m > *params.m_cap) {
    sc.m = *params.m_cap;
    sc.clamped = true;
  }
  if (params.m_override) {
    sc.m = *params.m_override;
    sc.clamped = false;
  }
  return sc;
}

/// Reverse BFS with reusable scratch space. One sampler per thread.
class RrSampler {
 public:
  RrSampler(const LiveGraphView& view, std::span<const double> w)
      : view_(&view), w_(w), stamp_(view.base().num_nodes(), 0) {
    if (w.size() != view.base().num_arcs())
      throw ValidationError("probability vector does not match arc count");
  }

  /// Samples one RR set for a target drawn uniformly from `targets` and
  /// calls `visit(node)` for each member, target first.
  template <typename Visit>
  NodeId sample(std::span<const NodeId> targets, Rng& rng, Visit&& visit) {
    if (targets.empty()) throw ValidationError("RR set needs a nonempty target set");
    const NodeId target = targets[rng.below(targets.size())];
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    const DiGraph& g = view_->base();
    queue_.clear();
    queue_.push_back(target);
    stamp_[target] = epoch_;
    visit(target);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId v = queue_[head];
      for (ArcId e : g.in_arcs(v)) {
        if (!view_->live(e)) continue;
        const NodeId u = g.arc(e).origin;
        if (stamp_[u] == epoch_) continue;
        if (rng.uniform() < w_[e]) {
          stamp_[u] = epoch_;
          queue_.push_back(u);
          visit(u);
        }
      }
    }
    return target;
  }

  RrSet sample(std::span<const NodeId> targets, Rng& rng) {
    RrSet rr;
    rr.target = sample(targets, rng, [&](NodeId v) { rr.members.push_back(v); });
    return rr;
  }

 private:
  const LiveGraphView* view_;
  std::span<const double> w_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;
};

inline RrSet sample_rr_set(const LiveGraphView& view, std::span<const double> w,
                           std::span<const NodeId> targets, Rng& rng) {
  RrSampler sampler(view, w);
  return sampler.sample(targets, rng);
}

/// Reward-weighted membership counts: sum_i r(target_i) * 1(s in R_i).
inline std::vector<double> rr_coverage(const LiveGraphView& view, std::span<const double> w,
                                       std::span<const double> rewards,
                                       std::span<const NodeId> targets, std::size_t m, Rng& rng) {
  std::vector<double> acc(view.base().num_nodes(), 0.0);
  RrSampler sampler(view, w);
  std::vector<NodeId> members;
  for (std::size_t i = 0; i < m; ++i) {
    members.clear();
    const NodeId t = sampler.sample(targets, rng, [&](NodeId v) { members.push_back(v); });
    const double r = rewards[t];
    for (NodeId v : members) acc[v] += r;
  }
  return acc;
}

/// Estimated marginal gain of every node; targets are the non-activated
/// nodes. Throws if every node is already activated.
inline std::vector<double> estimate_marginals(const LiveGraphView& view,
                                              std::span<const double> w,
                                              std::span<const double> rewards,
                                              std::span<const NodeId> inactive, std::size_t m,
                                              Rng& rng) {
  if (m == 0) throw ValidationError("number of RR sets must be positive");
  if (inactive.empty()) throw ValidationError("all nodes activated; nothing to estimate");
  auto acc = rr_coverage(view, w, rewards, inactive, m, rng);
  const double scale = static_cast<double>(inactive.size()) / static_cast<double>(m);
  for (double& x : acc) x *= scale;
  return acc;
}

inline std::vector<double> estimate_marginals(const ObservedHistory& history,
                                              std::span<const double> w, std::size_t m,
                                              Rng& rng) {
  const auto inactive = history.inactive_nodes();
  return estimate_marginals(history.view(), w, history.graph().rewards(), inactive, m, rng);
}

namespace detail {
inline std::atomic<bool>& cap_warning_issued() {
  static std::atomic<bool> flag{false};
  return flag;
}
}  // namespace detail

/// Seed with the largest estimated marginal gain under probabilities `w`,
/// ties to the smallest id. std::nullopt once every node is activated.
inline std::optional<NodeId> greedy_select(const ObservedHistory& history,
                                           std::span<const double> w, const GreedyParams& params,
                                           Rng& rng) {
  const DiGraph& g = history.graph();
  const auto inactive = history.inactive_nodes();
  if (inactive.empty()) return std::nullopt;
  const SampleCount sc = resolve_sample_count(params, g.num_nodes(), g.max_reward());
  if (sc.clamped && !detail::cap_warning_issued().exchange(true))
    std::clog << "warning: RR sample count " << sc.formula << " clamped to " << sc.m << '\n';
  const auto acc = rr_coverage(history.view(), w, g.rewards(), inactive, sc.m, rng);
  NodeId best = 0;
  for (NodeId v = 1; v < acc.size(); ++v)
    if (acc[v] > acc[best]) best = v;
  return best;
}

}  // namespace aimi
