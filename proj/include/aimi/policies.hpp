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

// Seeding policies: the baselines and the RR-greedy oracles that do not use
// edge features. The feature-based learner lives in learning.hpp.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aimi/diffusion.hpp"
#include "aimi/graph.hpp"
#include "aimi/rng.hpp"
#include "aimi/rr.hpp"

namespace aimi {

enum class PolicyKind { kRandom, kBiggestDegree, kGreedyKnown, kGreedyLinear, kGreedyCucb };

inline constexpr std::string_view policy_id(PolicyKind k) {
  switch (k) {
    case PolicyKind::kRandom: return "rdm";
    case PolicyKind::kBiggestDegree: return "bgg_dgr";
    case PolicyKind::kGreedyKnown: return "grd_kw";
    case PolicyKind::kGreedyLinear: return "grd_lf";
    case PolicyKind::kGreedyCucb: return "grd_lnf";
  }
  return "";
}

inline std::optional<PolicyKind> parse_policy_id(std::string_view id) {
  for (auto k : {PolicyKind::kRandom, PolicyKind::kBiggestDegree, PolicyKind::kGreedyKnown,
                 PolicyKind::kGreedyLinear, PolicyKind::kGreedyCucb})
    if (policy_id(k) == id) return k;
  return std::nullopt;
}

/// An adaptive policy. next_seed sees only the observed history and the
/// policy's own learned state; std::nullopt terminates the run.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view id() const = 0;
  virtual std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t round,
                                          Rng& rng) = 0;
  virtual void observe(const RoundFeedback& /*feedback*/) {}
};

/// Uniform over all nodes, activated or not.
class RandomPolicy final : public Policy {
 public:
  std::string_view id() const override { return policy_id(PolicyKind::kRandom); }
  std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t,
                                  Rng& rng) override {
    const std::size_t n = history.graph().num_nodes();
    if (n == 0) return std::nullopt;
    return static_cast<NodeId>(rng.below(n));
  }
};

/// Largest live out-degree; ties to the smallest id.
class BiggestDegreePolicy final : public Policy {
 public:
  std::string_view id() const override { return policy_id(PolicyKind::kBiggestDegree); }
  std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t, Rng&) override {
    const std::size_t n = history.graph().num_nodes();
    if (n == 0) return std::nullopt;
    NodeId best = 0;
    std::size_t best_deg = history.view().live_out_degree(0);
    for (NodeId v = 1; v < n; ++v) {
      const std::size_t deg = history.view().live_out_degree(v);
      if (deg > best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    return best;
  }
};

/// RR greedy under the true probabilities.
class KnownGreedyPolicy final : public Policy {
 public:
  KnownGreedyPolicy(std::vector<double> probabilities, GreedyParams params)
      : w_(std::move(probabilities)), params_(params) {
    params_.validate();
  }

  std::string_view id() const override { return policy_id(PolicyKind::kGreedyKnown); }
  std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t,
                                  Rng& rng) override {
    return greedy_select(history, w_, params_, rng);
  }

 private:
  std::vector<double> w_;
  GreedyParams params_;
};

/// CUCB confidence index: 1 for unobserved arcs, else
/// min(1, mean + sqrt(scale * ln t / (2 count))).
inline double cucb_index(double mean, std::size_t count, std::size_t round,
                         double radius_scale = 3.0) {
  if (count == 0) return 1.0;
  const double t = static_cast<double>(std::max<std::size_t>(round, 1));
  const double radius = std::sqrt(radius_scale * std::log(t) / (2.0 * static_cast<double>(count)));
  return std::min(1.0, mean + radius);
}

/// Per-arc optimistic estimates from empirical means, fed to RR greedy.
class CucbPolicy final : public Policy {
 public:
  CucbPolicy(std::size_t num_arcs, GreedyParams params, double radius_scale = 3.0)
      : count_(num_arcs, 0), successes_(num_arcs, 0), params_(params),
        radius_scale_(radius_scale) {
    params_.validate();
  }

  std::string_view id() const override { return policy_id(PolicyKind::kGreedyCucb); }

  std::vector<double> estimates(std::size_t round) const {
    std::vector<double> u(count_.size());
    for (std::size_t e = 0; e < u.size(); ++e) u[e] = cucb_index(mean(e), count_[e], round, radius_scale_);
    return u;
  }

  std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t round,
                                  Rng& rng) override {
    const auto u = estimates(round);
    return greedy_select(history, u, params_, rng);
  }

  void observe(const RoundFeedback& feedback) override {
    for (const auto& obs : feedback.observed) {
      ++count_[obs.arc];
      successes_[obs.arc] += obs.success ? 1 : 0;
    }
  }

  std::size_t count(std::size_t e) const { return count_[e]; }
  double mean(std::size_t e) const {
    return count_[e] == 0 ? 0.0
                          : static_cast<double>(successes_[e]) / static_cast<double>(count_[e]);
  }

 private:
  std::vector<std::size_t> count_;
  std::vector<std::size_t> successes_;
  GreedyParams params_;
  double radius_scale_;
};

}  // namespace aimi
