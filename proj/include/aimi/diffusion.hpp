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

// Multi-round Independent Cascade with intermediary constraints.
//
// Arc outcomes come from a draw source indexed by (arc, column), where the
// column is the number of times the arc has already been observed in the
// history. A pre-sampled RealizationMatrix and the counter-based streaming
// source are interchangeable.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "aimi/error.hpp"
#include "aimi/graph.hpp"
#include "aimi/rng.hpp"

namespace aimi {

/// |E| x C binary matrix; entry (e, j) is the outcome of the j-th
/// observation of arc e (0-based j).
class RealizationMatrix {
 public:
  RealizationMatrix() = default;
  RealizationMatrix(std::size_t num_arcs, std::size_t columns)
      : num_arcs_(num_arcs), columns_(columns), bits_(num_arcs * columns, 0) {
    if (columns == 0) throw ValidationError("realization matrix needs at least one column");
  }

  /// Every entry i.i.d. Bernoulli(p(e)), drawn row-major.
  static RealizationMatrix sample(const DiGraph& g, std::size_t columns, Rng& rng) {
    RealizationMatrix m(g.num_arcs(), columns);
    for (ArcId e = 0; e < g.num_arcs(); ++e)
      for (std::size_t j = 0; j < columns; ++j) m.set(e, j, rng.bernoulli(g.probability(e)));
    return m;
  }

  std::size_t num_arcs() const noexcept { return num_arcs_; }
  std::size_t columns() const noexcept { return columns_; }
  bool bit(ArcId e, std::size_t j) const { return bits_[e * columns_ + j] != 0; }
  void set(ArcId e, std::size_t j, bool b) { bits_[e * columns_ + j] = b ? 1 : 0; }
  void flip(ArcId e, std::size_t j) { set(e, j, !bit(e, j)); }

  /// P_M(M) for the given probabilities.
  double probability(std::span<const double> w) const {
    double p = 1.0;
    for (ArcId e = 0; e < num_arcs_; ++e)
      for (std::size_t j = 0; j < columns_; ++j) p *= bit(e, j) ? w[e] : 1.0 - w[e];
    return p;
  }

  friend bool operator==(const RealizationMatrix&, const RealizationMatrix&) = default;

 private:
  std::size_t num_arcs_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Reads arc outcomes from a fixed matrix.
class MatrixDraws {
 public:
  explicit MatrixDraws(const RealizationMatrix& m) : m_(&m) {}

  bool draw(ArcId e, std::size_t column) const {
    if (column >= m_->columns()) throw ExhaustedError("realization matrix exhausted");
    return m_->bit(e, column);
  }

 private:
  const RealizationMatrix* m_;
};

/// Lazily generated outcomes: bit (e, j) = [U(key, e, j) < p(e)]. Same law
/// as a sampled matrix, without materialising it.
class StreamingDraws {
 public:
  StreamingDraws(std::uint64_t key, std::span<const double> probabilities)
      : key_(key), p_(probabilities) {}

  bool draw(ArcId e, std::size_t column) const {
    return counter_bernoulli(key_, e, column, p_[e]);
  }

 private:
  std::uint64_t key_;
  std::span<const double> p_;
};

/// Observed prefix of each row of a realization matrix.
class PartialMatrix {
 public:
  enum class Entry : std::uint8_t { kZero = 0, kOne = 1, kUnknown = 2 };

  PartialMatrix() = default;
  PartialMatrix(std::size_t num_arcs, std::size_t columns) : columns_(columns), rows_(num_arcs) {}

  std::size_t num_arcs() const noexcept { return rows_.size(); }
  std::size_t columns() const noexcept { return columns_; }
  std::size_t observed_count(ArcId e) const { return rows_[e].size(); }
  std::span<const std::uint8_t> row(ArcId e) const { return rows_[e]; }

  Entry entry(ArcId e, std::size_t j) const {
    if (j >= rows_[e].size()) return Entry::kUnknown;
    return rows_[e][j] != 0 ? Entry::kOne : Entry::kZero;
  }

  bool any_success(ArcId e) const {
    for (auto b : rows_[e])
      if (b != 0) return true;
    return false;
  }

  void append(ArcId e, bool bit) {
    if (rows_[e].size() >= columns_) throw ExhaustedError("realization matrix exhausted");
    rows_[e].push_back(bit ? 1 : 0);
  }

  friend bool operator==(const PartialMatrix&, const PartialMatrix&) = default;

 private:
  std::size_t columns_ = 0;
  std::vector<std::vector<std::uint8_t>> rows_;
};

struct ArcObservation {
  ArcId arc;
  bool success;
  friend bool operator==(const ArcObservation&, const ArcObservation&) = default;
};

/// Semi-bandit feedback of one round.
struct RoundFeedback {
  std::size_t round = 0;  // 1-based
  NodeId seed = 0;
  std::vector<ArcObservation> observed;
  std::vector<NodeId> newly_activated;     // not activated in any earlier round
  std::vector<NodeId> new_intermediaries;  // in-arcs removed after this round
  friend bool operator==(const RoundFeedback&, const RoundFeedback&) = default;
};

/// Everything an adaptive policy may condition on, plus the live view the
/// intermediary constraint has produced so far.
class ObservedHistory {
 public:
  ObservedHistory(const DiGraph& g, std::size_t columns)
      : graph_(&g),
        partial_(g.num_arcs(), columns),
        activated_(g.num_nodes(), 0),
        consumed_(g.num_nodes(), 0),
        view_(g) {}

  const DiGraph& graph() const noexcept { return *graph_; }
  const std::vector<NodeId>& sequence() const noexcept { return sequence_; }
  const PartialMatrix& partial() const noexcept { return partial_; }
  const LiveGraphView& view() const noexcept { return view_; }
  const std::vector<RoundFeedback>& rounds() const noexcept { return rounds_; }
  std::size_t num_rounds() const noexcept { return sequence_.size(); }

  bool activated(NodeId v) const { return activated_[v] != 0; }
  bool consumed(NodeId v) const { return consumed_[v] != 0; }
  std::size_t num_activated() const noexcept { return num_activated_; }
  bool all_activated() const noexcept { return num_activated_ == graph_->num_nodes(); }

  std::vector<NodeId> activated_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < activated_.size(); ++v)
      if (activated_[v]) out.push_back(v);
    return out;
  }

  /// Nodes not yet activated, in id order.
  std::vector<NodeId> inactive_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < activated_.size(); ++v)
      if (!activated_[v]) out.push_back(v);
    return out;
  }

  /// Sum of rewards over distinct activated nodes, accumulated in id order.
  double reward() const {
    double total = 0.0;
    for (NodeId v = 0; v < activated_.size(); ++v)
      if (activated_[v]) total += graph_->reward(v);
    return total;
  }

  /// Runs one IC round from `seed`. Every live arc whose origin activates
  /// this round is observed exactly once; intermediaries lose their in-arcs
  /// only after the round is complete.
  template <typename DrawSource>
  const RoundFeedback& run_round(NodeId seed, const DrawSource& draws) {
    if (!graph_->contains(seed)) throw ValidationError("seed node not in graph");
    const DiGraph& g = *graph_;
    RoundFeedback fb;
    fb.round = sequence_.size() + 1;
    fb.seed = seed;

    std::vector<NodeId> reached{seed};
    std::vector<char> in_round(g.num_nodes(), 0);
    in_round[seed] = 1;
    for (std::size_t head = 0; head < reached.size(); ++head) {
      const NodeId u = reached[head];
      for (ArcId e : g.out_arcs(u)) {
        if (!view_.live(e)) continue;
        const bool bit = draws.draw(e, partial_.observed_count(e));
        partial_.append(e, bit);
        fb.observed.push_back({e, bit});
        const NodeId x = g.arc(e).target;
        if (bit && !in_round[x]) {
          in_round[x] = 1;
          reached.push_back(x);
        }
      }
    }

    for (NodeId v : reached) {
      if (!activated_[v]) fb.newly_activated.push_back(v);
      if (v != seed && !consumed_[v]) fb.new_intermediaries.push_back(v);
    }
    for (NodeId v : fb.new_intermediaries) {
      view_.remove_incoming(v);
      consumed_[v] = 1;
    }
    for (NodeId v : fb.newly_activated) {
      activated_[v] = 1;
      ++num_activated_;
    }
    sequence_.push_back(seed);
    rounds_.push_back(std::move(fb));
    return rounds_.back();
  }

  /// Identity of the observable state: sequence and partial matrix.
  friend bool same_observation(const ObservedHistory& a, const ObservedHistory& b) {
    return a.sequence_ == b.sequence_ && a.partial_ == b.partial_;
  }

 private:
  const DiGraph* graph_;
  std::vector<NodeId> sequence_;
  PartialMatrix partial_;
  std::vector<char> activated_;
  std::vector<char> consumed_;
  std::size_t num_activated_ = 0;
  LiveGraphView view_;
  std::vector<RoundFeedback> rounds_;
};

template <typename DrawSource>
const RoundFeedback& run_round(ObservedHistory& history, NodeId seed, const DrawSource& draws) {
  return history.run_round(seed, draws);
}

inline double reward(const ObservedHistory& history) { return history.reward(); }

struct ReplayResult {
  ObservedHistory history;
  double value;
};

/// f(y, M): seeds `sequence` in order on a fresh history. Touches no RNG.
inline ReplayResult replay(const DiGraph& g, std::span<const NodeId> sequence,
                           const RealizationMatrix& m) {
  ObservedHistory h(g, m.columns());
  const MatrixDraws draws(m);
  for (NodeId v : sequence) h.run_round(v, draws);
  const double value = h.reward();
  return {std::move(h), value};
}

/// True iff replaying the history's sequence under `m` reproduces its
/// partial matrix.
inline bool is_consistent(const RealizationMatrix& m, const ObservedHistory& history) {
  if (m.num_arcs() != history.graph().num_arcs()) return false;
  try {
    const auto r = replay(history.graph(), history.sequence(), m);
    const PartialMatrix& a = r.history.partial();
    const PartialMatrix& b = history.partial();
    for (ArcId e = 0; e < a.num_arcs(); ++e)
      if (!std::ranges::equal(a.row(e), b.row(e))) return false;
    return true;
  } catch (const ExhaustedError&) {
    return false;
  }
}

}  // namespace aimi
