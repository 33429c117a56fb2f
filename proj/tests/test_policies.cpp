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

#include <gtest/gtest.h>

#include "aimi/policies.hpp"
#include "test_util.hpp"

namespace aimi {
namespace {

using testing::make_graph;

TEST(PolicyIds, RoundTrip) {
  for (auto k : {PolicyKind::kRandom, PolicyKind::kBiggestDegree, PolicyKind::kGreedyKnown,
                 PolicyKind::kGreedyLinear, PolicyKind::kGreedyCucb})
    EXPECT_EQ(parse_policy_id(policy_id(k)), k);
  EXPECT_EQ(policy_id(PolicyKind::kGreedyCucb), "grd_lnf");
  EXPECT_FALSE(parse_policy_id("greedy"));
}

TEST(Random, SingleNode) {
  DiGraph g;
  g.add_nodes(1);
  const ObservedHistory h(g, 1);
  RandomPolicy p;
  Rng rng(1);
  EXPECT_EQ(p.next_seed(h, 1, rng), NodeId{0});
}

TEST(Random, UniformFrequencies) {
  DiGraph g;
  g.add_nodes(4);
  const ObservedHistory h(g, 1);
  RandomPolicy p;
  Rng rng(2);
  std::vector<double> freq(4, 0.0);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) freq[*p.next_seed(h, 1, rng)] += 1.0 / n;
  for (double f : freq) EXPECT_NEAR(f, 0.25, 0.007);
}

TEST(Random, Reproducible) {
  DiGraph g;
  g.add_nodes(10);
  const ObservedHistory h(g, 1);
  RandomPolicy p;
  Rng a(3), b(3);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(p.next_seed(h, 1, a), p.next_seed(h, 1, b));
}

TEST(BiggestDegree, StarCenter) {
  DiGraph g;
  g.add_nodes(6);
  for (NodeId v = 1; v <= 5; ++v) g.add_arc(0, v, 0.1);
  const ObservedHistory h(g, 1);
  BiggestDegreePolicy p;
  Rng rng(1);
  EXPECT_EQ(p.next_seed(h, 1, rng), NodeId{0});
}

TEST(BiggestDegree, TiesAndLiveRecount) {
  const DiGraph g = make_graph(5, {{0, 1, 1.0}, {0, 2, 1.0}, {3, 1, 1.0}, {3, 4, 1.0}, {3, 0, 1.0}, {1, 2, 1.0}});
  ObservedHistory h(g, 2);
  BiggestDegreePolicy p;
  Rng rng(1);
  EXPECT_EQ(p.next_seed(h, 1, rng), NodeId{3});
  const StreamingDraws draws(1, g.probabilities());
  h.run_round(3, draws);
  // Every other node became an intermediary, so all live degrees are 0.
  EXPECT_EQ(h.view().live_out_degree(3), 0u);
  EXPECT_EQ(p.next_seed(h, 2, rng), NodeId{0});

  DiGraph flat;
  flat.add_nodes(3);
  const ObservedHistory fh(flat, 1);
  EXPECT_EQ(p.next_seed(fh, 1, rng), NodeId{0});
}

TEST(Cucb, WarmStartIsOne) {
  CucbPolicy p(7, GreedyParams{});
  for (double u : p.estimates(1)) EXPECT_EQ(u, 1.0);
}

TEST(Cucb, IndexArithmetic) {
  EXPECT_EQ(cucb_index(1.0 / 3.0, 3, 20), 1.0);
  EXPECT_DOUBLE_EQ(std::min(1.0, 1.0 / 3.0 + std::sqrt(3.0 * std::log(20.0) / 6.0)), 1.0);
  EXPECT_DOUBLE_EQ(cucb_index(0.1, 1000, 20), 0.1 + std::sqrt(3.0 * std::log(20.0) / 2000.0));
  EXPECT_DOUBLE_EQ(cucb_index(0.2, 5, 1), 0.2);
}

TEST(Cucb, MeanConverges) {
  const DiGraph g = make_graph(2, {{0, 1, 0.05}});
  CucbPolicy p(1, GreedyParams{});
  Rng rng(4);
  for (std::size_t i = 0; i < 10000; ++i) {
    RoundFeedback fb;
    fb.observed.push_back({0, rng.bernoulli(0.05)});
    p.observe(fb);
  }
  EXPECT_EQ(p.count(0), 10000u);
  EXPECT_NEAR(p.mean(0), 0.05, 0.007);
}

}  // namespace
}  // namespace aimi
