// Copyright 2026 The dpopt Authors.
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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpopt {

/// Dense table indexed [state][action].
using Table = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance for simplex membership of policies, distributions and kernels.
inline constexpr double kSimplexTol = 1e-12;

/**
A finite discounted MDP (S, A, P, r, gamma).

Transitions are stored as a (|S|*|A|) x |S| row-stochastic matrix whose row
`s * |A| + a` holds P(. | s, a). The object is immutable once constructed;
the constructor rejects any instance that violates the model invariants.
*/
class Mdp {
 public:
  Mdp(Table rewards, Eigen::MatrixXd transitions, double gamma);

  /// Returns a description of the first violated invariant, or nothing.
  static std::optional<std::string> find_violation(const Table& rewards,
                                                   const Eigen::MatrixXd& transitions,
                                                   double gamma);

  int num_states() const { return static_cast<int>(rewards_.rows()); }
  int num_actions() const { return static_cast<int>(rewards_.cols()); }
  double gamma() const { return gamma_; }

  const Table& rewards() const { return rewards_; }
  const Eigen::MatrixXd& transitions() const { return transitions_; }

  double reward(int s, int a) const { return rewards_(s, a); }
  double transition(int s, int a, int next) const {
    return transitions_(static_cast<Eigen::Index>(s) * num_actions() + a, next);
  }

  /// max |r| / (1 - gamma), a bound on every policy value.
  double value_bound() const;

 private:
  Table rewards_;
  Eigen::MatrixXd transitions_;
  double gamma_;
};

/// Probability vector over states (mu).
class StateDistribution {
 public:
  explicit StateDistribution(Vector weights);

  static StateDistribution uniform(int num_states);
  static StateDistribution point_mass(int num_states, int state);

  const Vector& weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }
  bool strictly_positive() const { return (weights_.array() > 0.0).all(); }

 private:
  Vector weights_;
};

/// Stochastic policy pi(a|s); deterministic policies are one-hot rows.
class Policy {
 public:
  explicit Policy(Table probs);

  static Policy uniform(int num_states, int num_actions);
  static Policy deterministic(const std::vector<int>& actions, int num_actions);

  const Table& probs() const { return probs_; }
  double operator()(int s, int a) const { return probs_(s, a); }
  int num_states() const { return static_cast<int>(probs_.rows()); }
  int num_actions() const { return static_cast<int>(probs_.cols()); }

  /// Exact (bitwise) equality of the probability tables.
  bool operator==(const Policy& other) const;

 private:
  Table probs_;
};

struct ValueFunction {
  Vector values;
};

struct QFunction {
  Table values;
};

/// Discounted state occupancy (1 - gamma) mu (I - gamma P_pi)^{-1}.
struct Occupancy {
  Vector weights;
};

/// Checks that every row of `rows` lies on the probability simplex.
std::optional<std::string> simplex_row_violation(const Table& rows, double tol = kSimplexTol);

/// Largest per-state total variation 0.5 * |p(.|s) - q(.|s)|_1.
double total_variation(const Table& p, const Table& q);

struct PolicyModel {
  Eigen::MatrixXd kernel;  // P_pi, |S| x |S|
  Vector reward;           // r_pi
};

PolicyModel policy_kernel_and_reward(const Mdp& mdp, const Policy& pi);

/// q(s,a) = r(s,a) + gamma * sum_s' P(s'|s,a) v(s').
QFunction q_from_v(const Mdp& mdp, const ValueFunction& v);

/// T_pi v, evaluated as sum_a pi(a|s) q(s,a) with q = q_from_v(v).
ValueFunction bellman_eval(const Mdp& mdp, const Policy& pi, const ValueFunction& v);

/// T_* v = max_a q_from_v(v)(., a).
ValueFunction bellman_optimal(const Mdp& mdp, const ValueFunction& v);

/// Solves (I - gamma P_pi) v = r_pi with a dense LU factorization.
/// Throws std::runtime_error if the inputs are not finite or the solve fails.
ValueFunction policy_value(const Mdp& mdp, const Policy& pi);

QFunction policy_q(const Mdp& mdp, const Policy& pi);

/// State-action evaluation operator
/// (T_pi q)(s,a) = r(s,a) + gamma sum_s' P(s'|s,a) sum_a' pi(a'|s') q(s',a').
QFunction bellman_eval_q(const Mdp& mdp, const Policy& pi, const QFunction& q);

/// Applies bellman_eval_q exactly `m` times; m must be >= 1.
QFunction partial_eval(const Mdp& mdp, const Policy& pi, const QFunction& q_prev, int m);

/// Per-state argmax as a one-hot policy; ties go to the lowest action index.
Policy greedy(const QFunction& q);

/// Lowest-index argmax of every row.
std::vector<int> greedy_actions(const Table& q);

/// J(pi) = sum_s mu(s) v_pi(s).
double objective_j(const Mdp& mdp, const Policy& pi, const StateDistribution& mu);

Occupancy occupancy(const Mdp& mdp, const Policy& pi, const StateDistribution& mu);

/// <a, b>_mu = sum_s mu(s) sum_a a(s,a) b(s,a).
double weighted_inner(const StateDistribution& mu, const Table& a, const Table& b);

/// sum_a pi(a|s) q(s,a) for every state.
Vector expected_under(const Policy& pi, const Table& q);

}  // namespace dpopt
