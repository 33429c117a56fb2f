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

// Directed social graph: nodes with rewards and costs, arcs with influence
// probabilities, optional edge features, and the live-arc view that the
// intermediary constraint shrinks over a run.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aimi/error.hpp"
#include "aimi/rng.hpp"

namespace aimi {

using NodeId = std::uint32_t;
using ArcId = std::uint32_t;

struct Arc {
  NodeId origin;
  NodeId target;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct ProbabilityRange {
  double lo = 0.0;
  double hi = 0.1;
};

/// Node-labelled digraph. Arc ids are dense and follow insertion order,
/// which fixes the row order of realization matrices.
class DiGraph {
 public:
  struct Options {
    bool allow_self_loops = false;
  };

  DiGraph() = default;
  explicit DiGraph(Options options) : options_(options) {}

  std::size_t num_nodes() const noexcept { return labels_.size(); }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  const Arc& arc(ArcId e) const { return arcs_[e]; }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  double probability(ArcId e) const { return probability_[e]; }
  std::span<const double> probabilities() const noexcept { return probability_; }
  double reward(NodeId v) const { return reward_[v]; }
  std::span<const double> rewards() const noexcept { return reward_; }
  double cost(NodeId v) const { return cost_[v]; }
  std::span<const ArcId> out_arcs(NodeId v) const { return out_[v]; }
  std::span<const ArcId> in_arcs(NodeId v) const { return in_[v]; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  bool contains(NodeId v) const noexcept { return v < num_nodes(); }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ArcId> find_arc(NodeId u, NodeId v) const {
    for (ArcId e : out_[u])
      if (arcs_[e].target == v) return e;
    return std::nullopt;
  }

  double max_reward() const {
    return reward_.empty() ? 0.0 : *std::max_element(reward_.begin(), reward_.end());
  }

  /// Returns the id for `label`, creating the node if needed.
  NodeId add_node(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) {
      labels_.push_back(label);
      reward_.push_back(1.0);
      cost_.push_back(1.0);
      out_.emplace_back();
      in_.emplace_back();
    }
    return it->second;
  }

  /// Adds nodes labelled "0".."n-1".
  void add_nodes(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) add_node(std::to_string(i));
  }

  ArcId add_arc(NodeId u, NodeId v, double p) {
    if (!contains(u) || !contains(v)) throw ValidationError("arc endpoint not in graph");
    if (u == v && !options_.allow_self_loops)
      throw ValidationError("self-loop on node " + labels_[u] + " rejected");
    if (!(p > 0.0 && p <= 1.0))
      throw ValidationError("probability " + format_double(p) + " outside (0, 1]");
    if (!arc_keys_.insert(key(u, v)).second)
      throw ValidationError("duplicate arc " + labels_[u] + " -> " + labels_[v]);
    const auto e = static_cast<ArcId>(arcs_.size());
    arcs_.push_back({u, v});
    probability_.push_back(p);
    out_[u].push_back(e);
    in_[v].push_back(e);
    return e;
  }

  void set_probability(ArcId e, double p) {
    if (!(p > 0.0 && p <= 1.0))
      throw ValidationError("probability " + format_double(p) + " outside (0, 1]");
    probability_.at(e) = p;
  }

  void set_probabilities(std::span<const double> p) {
    if (p.size() != num_arcs()) throw ValidationError("probability vector has wrong length");
    for (ArcId e = 0; e < p.size(); ++e) set_probability(e, p[e]);
  }

  void set_reward(NodeId v, double r, double r_min = 0.01) {
    if (!(r_min > 0.0) || !(r >= r_min && r <= 1.0))
      throw ValidationError("reward " + format_double(r) + " for node " + labels_.at(v) +
                            " outside [" + format_double(r_min) + ", 1]");
    reward_.at(v) = r;
  }

  void set_cost(NodeId v, double c) {
    if (!(c > 0.0)) throw ValidationError("cost must be positive");
    cost_.at(v) = c;
  }

  static std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return os.str();
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  Options options_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Arc> arcs_;
  std::unordered_set<std::uint64_t> arc_keys_;
  std::vector<double> probability_;
  std::vector<double> reward_;
  std::vector<double> cost_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> tokens;
  for (std::string tok; is >> tok;) tokens.push_back(std::move(tok));
  return tokens;
}

inline bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

inline double parse_real(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(line_no, "expected a number, got '" + tok + "'");
  if (!std::isfinite(x)) throw ParseError(line_no, "non-finite number '" + tok + "'");
  return x;
}

}  // namespace detail

/// Reads "u v" or "u v p" lines. Labels are remapped to dense ids in order of
/// first appearance; missing probabilities are drawn from `range` in file
/// order.
inline DiGraph load_edge_list(std::istream& in, ProbabilityRange range, Rng& rng,
                              DiGraph::Options options = {}) {
  if (!(range.lo >= 0.0 && range.hi <= 1.0 && range.lo < range.hi))
    throw ValidationError("probability range must satisfy 0 <= lo < hi <= 1");
  DiGraph g(options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(line_no, "expected 'u v' or 'u v p', got " + std::to_string(tok.size()) +
                                    " fields");
    double p = 0.0;
    if (tok.size() == 3) {
      p = detail::parse_real(tok[2], line_no);
    } else {
      do p = rng.uniform(range.lo, range.hi);
      while (p <= 0.0);
    }
    const NodeId u = g.add_node(tok[0]);
    const NodeId v = g.add_node(tok[1]);
    try {
      g.add_arc(u, v, p);
    } catch (const ValidationError& err) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return g;
}

/// Applies "u r" lines. Every label must already exist in `g`.
inline void load_rewards(std::istream& in, DiGraph& g, double r_min = 0.01) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() != 2) throw ParseError(line_no, "expected 'u r'");
    const auto v = g.find(tok[0]);
    if (!v) throw ValidationError("line " + std::to_string(line_no) + ": unknown node " + tok[0]);
    try {
      g.set_reward(*v, detail::parse_real(tok[1], line_no), r_min);
    } catch (const ValidationError& err) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + err.what());
    }
  }
}

/// Per-node feature vectors; `present[v]` is false for nodes without one.
struct NodeFeatures {
  std::size_t dim = 0;
  std::vector<std::vector<double>> rows;
  std::vector<bool> present;

  NodeFeatures() = default;
  NodeFeatures(std::size_t num_nodes, std::size_t d)
      : dim(d), rows(num_nodes, std::vector<double>(d, 0.0)), present(num_nodes, false) {}

  void set(NodeId v, std::vector<double> x) {
    if (x.size() != dim) throw ValidationError("node feature has wrong dimension");
    rows.at(v) = std::move(x);
    present[v] = true;
  }
};

/// Reads "u f1 ... fd" lines; d is fixed by the first line.
inline NodeFeatures load_node_features(std::istream& in, const DiGraph& g) {
  NodeFeatures nf;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skip_line(line)) continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() < 2) throw ParseError(line_no, "expected 'u f1 ... fd'");
    if (nf.dim == 0) nf = NodeFeatures(g.num_nodes(), tok.size() - 1);
    if (tok.size() - 1 != nf.dim)
      throw ParseError(line_no, "feature dimension " + std::to_string(tok.size() - 1) +
                                    " differs from " + std::to_string(nf.dim));
    const auto v = g.find(tok[0]);
    if (!v) continue;  // nodes absent from the edge list carry no arcs
    std::vector<double> x(nf.dim);
    for (std::size_t i = 0; i < nf.dim; ++i) x[i] = detail::parse_real(tok[i + 1], line_no);
    nf.set(*v, std::move(x));
  }
  if (nf.dim == 0) nf = NodeFeatures(g.num_nodes(), 0);
  return nf;
}

/// Dense |E| x d table of edge feature vectors.
class EdgeFeatureTable {
 public:
  EdgeFeatureTable() = default;
  EdgeFeatureTable(std::size_t num_arcs, std::size_t d) : dim_(d), data_(num_arcs * d, 0.0) {
    if (d == 0) throw ValidationError("feature dimension must be positive");
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_arcs() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::span<const double> row(ArcId e) const { return {data_.data() + e * dim_, dim_}; }
  std::span<double> row(ArcId e) { return {data_.data() + e * dim_, dim_}; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// x_(u,v)[i] = nf(u)[i] * nf(v)[i].
inline EdgeFeatureTable derive_edge_features(const DiGraph& g, const NodeFeatures& nf) {
  if (nf.dim == 0) throw ValidationError("node features have dimension 0");
  if (nf.rows.size() != g.num_nodes() || nf.present.size() != g.num_nodes())
    throw ValidationError("node feature table does not match graph");
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!nf.present[v]) throw ValidationError("missing feature vector for node " + g.label(v));
    if (nf.rows[v].size() != nf.dim)
      throw ValidationError("feature dimension mismatch for node " + g.label(v));
  }
  EdgeFeatureTable table(g.num_arcs(), nf.dim);
  for (ArcId e = 0; e < g.num_arcs(); ++e) {
    const auto& xu = nf.rows[g.arc(e).origin];
    const auto& xv = nf.rows[g.arc(e).target];
    auto out = table.row(e);
    for (std::size_t i = 0; i < nf.dim; ++i) out[i] = xu[i] * xv[i];
  }
  return table;
}

/// A well-specified linear instance: probabilities[e] == <x_e, theta>.
struct SyntheticLinearModel {
  NodeFeatures node_features;
  EdgeFeatureTable edge_features;
  std::vector<double> theta;
  std::vector<double> probabilities;
};

/// Node features with a leading constant coordinate and the rest uniform in
/// [0, 1]; theta puts every <x_e, theta> inside [lo, hi] with the maximum
/// attained up to rounding. For d == 1 features lie in [sqrt(lo/hi), 1] and theta = hi.
inline SyntheticLinearModel synth_node_features(const DiGraph& g, std::size_t d, Rng& rng,
                                                ProbabilityRange range = {0.01, 0.1}) {
  if (d < 1) throw ValidationError("feature dimension must be at least 1");
  if (!(range.lo > 0.0 && range.hi < 1.0 && range.lo <= range.hi))
    throw ValidationError("infeasible probability range for a linear model");
  SyntheticLinearModel m;
  m.node_features = NodeFeatures(g.num_nodes(), d);
  m.theta.assign(d, 0.0);
  if (d == 1) {
    const double floor = std::sqrt(range.lo / range.hi) * (1.0 + 1e-12);
    for (NodeId v = 0; v < g.num_nodes(); ++v) m.node_features.set(v, {rng.uniform(floor, 1.0)});
    m.theta[0] = range.hi;
  } else {
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::vector<double> x(d);
      x[0] = 1.0;
      for (std::size_t i = 1; i < d; ++i) x[i] = rng.uniform();
      m.node_features.set(v, std::move(x));
    }
    m.theta[0] = range.lo;
    for (std::size_t i = 1; i < d; ++i) m.theta[i] = rng.uniform(0.05, 1.0);
  }
  m.edge_features = derive_edge_features(g, m.node_features);
  if (d > 1 && g.num_arcs() > 0) {
    double widest = 0.0;
    for (ArcId e = 0; e < g.num_arcs(); ++e) {
      const auto x = m.edge_features.row(e);
      double s = 0.0;
      for (std::size_t i = 1; i < d; ++i) s += x[i] * m.theta[i];
      widest = std::max(widest, s);
    }
    const double scale = widest > 0.0 ? (range.hi - range.lo) / widest * (1.0 - 1e-12) : 0.0;
    for (std::size_t i = 1; i < d; ++i) m.theta[i] *= scale;
  }
  m.probabilities.resize(g.num_arcs());
  for (ArcId e = 0; e < g.num_arcs(); ++e) {
    const auto x = m.edge_features.row(e);
    double p = 0.0;
    for (std::size_t i = 0; i < d; ++i) p += x[i] * m.theta[i];
    m.probabilities[e] = p;
  }
  return m;
}

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_arcs = 0;
  double p_max = 0.0;
  std::size_t d_max = 0;
  std::size_t l_max = 0;
  bool subcritical = true;

  double criticality() const { return p_max * static_cast<double>(d_max); }
};

inline GraphStats graph_stats(const DiGraph& g) {
  GraphStats s;
  s.num_nodes = g.num_nodes();
  s.num_arcs = g.num_arcs();
  for (double p : g.probabilities()) s.p_max = std::max(s.p_max, p);
  for (NodeId v = 0; v < g.num_nodes(); ++v) s.d_max = std::max(s.d_max, g.out_arcs(v).size());
  s.l_max = s.d_max;
  s.subcritical = s.criticality() < 1.0;
  return s;
}

/// The base graph minus the arcs removed so far. Removals never revert.
class LiveGraphView {
 public:
  explicit LiveGraphView(const DiGraph& base)
      : base_(&base), removed_(base.num_arcs(), 0) {}

  const DiGraph& base() const noexcept { return *base_; }
  bool live(ArcId e) const { return removed_[e] == 0; }
  std::size_t num_removed() const noexcept { return num_removed_; }
  std::size_t num_live() const noexcept { return base_->num_arcs() - num_removed_; }

  /// Removes every in-arc of `v`. Out-arcs of `v` are untouched.
  void remove_incoming(NodeId v) {
    for (ArcId e : base_->in_arcs(v)) {
      if (removed_[e] == 0) {
        removed_[e] = 1;
        ++num_removed_;
      }
    }
  }

  std::size_t live_out_degree(NodeId v) const {
    std::size_t k = 0;
    for (ArcId e : base_->out_arcs(v)) k += live(e) ? 1 : 0;
    return k;
  }

  std::vector<ArcId> live_arcs() const {
    std::vector<ArcId> out;
    out.reserve(num_live());
    for (ArcId e = 0; e < removed_.size(); ++e)
      if (live(e)) out.push_back(e);
    return out;
  }

  friend bool operator==(const LiveGraphView& a, const LiveGraphView& b) {
    return a.base_ == b.base_ && a.removed_ == b.removed_;
  }

 private:
  const DiGraph* base_;
  std::vector<char> removed_;
  std::size_t num_removed_ = 0;
};

/// Random digraph with `num_arcs` distinct arcs. Origins are drawn with
/// weight (i + 1)^-skew so out-degrees are heterogeneous; targets uniformly.
inline DiGraph generate_digraph(std::size_t num_nodes, std::size_t num_arcs, Rng& rng,
                                ProbabilityRange range = {0.0, 0.1}, double skew = 0.8) {
  if (num_nodes < 2) throw ValidationError("need at least two nodes");
  if (num_arcs > num_nodes * (num_nodes - 1)) throw ValidationError("too many arcs requested");
  DiGraph g;
  g.add_nodes(num_nodes);
  std::vector<double> cumulative(num_nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    total += std::pow(static_cast<double>(i + 1), -skew);
    cumulative[i] = total;
  }
  // Heavy origins saturate; fall back to uniform origins when they do.
  std::size_t misses = 0;
  while (g.num_arcs() < num_arcs) {
    NodeId u = 0;
    if (misses < 64) {
      const double x = rng.uniform() * total;
      u = static_cast<NodeId>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                              cumulative.begin());
      u = std::min<NodeId>(u, static_cast<NodeId>(num_nodes - 1));
    } else {
      u = static_cast<NodeId>(rng.below(num_nodes));
    }
    const auto v = static_cast<NodeId>(rng.below(num_nodes));
    if (u == v || g.find_arc(u, v)) {
      ++misses;
      continue;
    }
    misses = 0;
    double p = 0.0;
    do p = rng.uniform(range.lo, range.hi);
    while (p <= 0.0);
    g.add_arc(u, v, p);
  }
  return g;
}

inline void write_edge_list(std::ostream& out, const DiGraph& g) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (ArcId e = 0; e < g.num_arcs(); ++e)
    out << g.label(g.arc(e).origin) << ' ' << g.label(g.arc(e).target) << ' '
        << g.probability(e) << '\n';
}

inline void write_node_features(std::ostream& out, const DiGraph& g, const NodeFeatures& nf) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!nf.present[v]) continue;
    out << g.label(v);
    for (double x : nf.rows[v]) out << ' ' << x;
    out << '\n';
  }
}

}  // namespace aimi
