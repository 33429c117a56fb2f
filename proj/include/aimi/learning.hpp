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

// UCB-AIMI: linear upper-confidence estimates of arc probabilities, fed to
// the RR greedy oracle each round, with Gram/response updates from
// semi-bandit feedback.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aimi/diffusion.hpp"
#include "aimi/error.hpp"
#include "aimi/graph.hpp"
#include "aimi/policies.hpp"
#include "aimi/rr.hpp"

namespace aimi {

/// Gram matrix N (starts at I), response B (starts at 0), and the ridge
/// estimate theta_hat solving N theta_hat = B.
class LinUcbState {
 public:
  LinUcbState(std::size_t d, double c)
      : gram_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))),
        response_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))),
        theta_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))),
        c_(c) {
    if (d == 0) throw ValidationError("feature dimension must be positive");
    if (!(c >= 0.0)) throw ValidationError("exploration scale c must be >= 0");
    refactor();
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(gram_.rows()); }
  double c() const noexcept { return c_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const Eigen::VectorXd& response() const noexcept { return response_; }
  const Eigen::VectorXd& theta_hat() const noexcept { return theta_; }
  std::size_t updates() const noexcept { return updates_; }

  /// x^T N^{-1} x via the current factorization.
  double confidence_width_sq(std::span<const double> x) const {
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    return std::max(0.0, xv.dot(ldlt_.solve(xv)));
  }

  double point_estimate(std::span<const double> x) const {
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    return xv.dot(theta_);
  }

  void add_observation(std::span<const double> x, bool success) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    gram_.noalias() += xv * xv.transpose();
    if (success) response_ += xv;
    ++updates_;
  }

  /// Re-solves theta_hat after a batch of observations.
  void refactor() {
    ldlt_.compute(gram_);
    theta_ = ldlt_.solve(response_);
  }

  /// Restores a checkpoint; N must be symmetric with the right shape.
  void restore(Eigen::MatrixXd gram, Eigen::VectorXd response, double c) {
    if (gram.rows() != gram_.rows() || gram.cols() != gram_.cols() ||
        response.size() != response_.size())
      throw ValidationError("snapshot dimension mismatch");
    gram_ = std::move(gram);
    response_ = std::move(response);
    c_ = c;
    refactor();
  }

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd response_;
  Eigen::VectorXd theta_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double c_;
  std::size_t updates_ = 0;
};

/// U(e) = clamp_[0,1](x_e^T theta_hat + c sqrt(x_e^T N^{-1} x_e)) for every
/// live arc; removed arcs get 0.
inline std::vector<double> compute_ucb(const LinUcbState& state, const EdgeFeatureTable& features,
                                       const LiveGraphView& view) {
  if (features.dim() != state.dim()) throw ValidationError("feature dimension mismatch");
  std::vector<double> u(view.base().num_arcs(), 0.0);
  for (ArcId e = 0; e < u.size(); ++e) {
    if (!view.live(e)) continue;
    const auto x = features.row(e);
    for (double xi : x)
      if (!std::isfinite(xi)) throw ValidationError("non-finite edge feature on arc " + std::to_string(e));
    const double v = state.point_estimate(x) + state.c() * std::sqrt(state.confidence_width_sq(x));
    u[e] = std::clamp(v, 0.0, 1.0);
  }
  return u;
}

/// N += sum x_e x_e^T, B += sum x_e y_e over the round's observations.
inline void update_state(LinUcbState& state, const RoundFeedback& feedback,
                         const EdgeFeatureTable& features) {
  if (feedback.observed.empty()) return;
  for (const auto& obs : feedback.observed) state.add_observation(features.row(obs.arc), obs.success);
  state.refactor();
}

/// sqrt(d log(1 + T |E| / d) + 2 log(1 / delta)) + ||theta||.
inline double recommended_c(std::size_t d, std::size_t horizon, std::size_t num_arcs,
                            double delta, double theta_norm) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const double dd = static_cast<double>(d);
  const double inner = dd * std::log(1.0 + static_cast<double>(horizon) *
                                               static_cast<double>(num_arcs) / dd) +
                       2.0 * std::log(1.0 / delta);
  return std::sqrt(inner) + theta_norm;
}

class UcbAimiPolicy final : public Policy {
 public:
  UcbAimiPolicy(const EdgeFeatureTable& features, double c, GreedyParams params)
      : features_(&features), state_(features.dim(), c), params_(params) {
    params_.validate();
  }

  std::string_view id() const override { return policy_id(PolicyKind::kGreedyLinear); }

  std::optional<NodeId> next_seed(const ObservedHistory& history, std::size_t,
                                  Rng& rng) override {
    last_ucb_ = compute_ucb(state_, *features_, history.view());
    return greedy_select(history, last_ucb_, params_, rng);
  }

  void observe(const RoundFeedback& feedback) override { update_state(state_, feedback, *features_); }

  const LinUcbState& state() const noexcept { return state_; }
  /// Estimates used for the most recent seed decision.
  const std::vector<double>& last_ucb() const noexcept { return last_ucb_; }

 private:
  const EdgeFeatureTable* features_;
  LinUcbState state_;
  GreedyParams params_;
  std::vector<double> last_ucb_;
};

/// Plain-text checkpoint: header line, then N row by row, then B.
inline void write_snapshot(std::ostream& out, const LinUcbState& state, std::size_t round) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "linucb d " << d << " round " << round << " c " << state.c() << '\n';
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out << (j ? " " : "") << state.gram()(i, j);
    out << '\n';
  }
  for (Eigen::Index i = 0; i < d; ++i) out << (i ? " " : "") << state.response()(i);
  out << '\n';
}

struct Snapshot {
  LinUcbState state;
  std::size_t round;
};

inline Snapshot read_snapshot(std::istream& in) {
  std::string tag, dkey, rkey, ckey;
  std::size_t d = 0, round = 0;
  double c = 0.0;
  if (!(in >> tag >> dkey >> d >> rkey >> round >> ckey >> c) || tag != "linucb" || dkey != "d" ||
      rkey != "round" || ckey != "c" || d == 0)
    throw ParseError(1, "bad snapshot header");
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(in >> gram(i, j))) throw ParseError(0, "truncated snapshot matrix");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(in >> response(i))) throw ParseError(0, "truncated snapshot vector");
  Snapshot s{LinUcbState(d, c), round};
  s.state.restore(std::move(gram), std::move(response), c);
  return s;
}

}  // namespace aimi
