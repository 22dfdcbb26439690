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

#include "dpopt/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpopt {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::string shape(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << m.rows() << "x" << m.cols();
  return out.str();
}

void require_policy_shape(const Mdp& mdp, const Policy& pi) {
  require(pi.num_states() == mdp.num_states() && pi.num_actions() == mdp.num_actions(),
          "policy shape " + shape(pi.probs()) + " does not match MDP " +
              std::to_string(mdp.num_states()) + "x" + std::to_string(mdp.num_actions()));
}

void require_table_shape(const Mdp& mdp, const Table& t, const char* what) {
  require(t.rows() == mdp.num_states() && t.cols() == mdp.num_actions(),
          std::string(what) + " shape " + shape(t) + " does not match MDP");
}

void require_value_size(const Mdp& mdp, const ValueFunction& v) {
  require(v.values.size() == mdp.num_states(),
          "value function has " + std::to_string(v.values.size()) + " entries, MDP has " +
              std::to_string(mdp.num_states()) + " states");
}

}  // namespace

std::optional<std::string> Mdp::find_violation(const Table& rewards,
                                               const Eigen::MatrixXd& transitions,
                                               double gamma) {
  const Eigen::Index ns = rewards.rows();
  const Eigen::Index na = rewards.cols();
  std::ostringstream err;
  if (ns <= 0 || na <= 0) return "num_states and num_actions must be positive";
  if (transitions.rows() != ns * na || transitions.cols() != ns) {
    err << "transitions must be " << ns * na << "x" << ns << " (got " << shape(transitions)
        << ")";
    return err.str();
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    err << "gamma = " << gamma << " is not strictly inside (0,1)";
    return err.str();
  }
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index a = 0; a < na; ++a) {
      if (!std::isfinite(rewards(s, a))) {
        err << "rewards[" << s << "][" << a << "] is not finite";
        return err.str();
      }
    }
  }
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index a = 0; a < na; ++a) {
      const Eigen::Index row = s * na + a;
      double sum = 0.0;
      for (Eigen::Index next = 0; next < ns; ++next) {
        const double p = transitions(row, next);
        if (!std::isfinite(p) || p < 0.0) {
          err << "transitions[" << s << "][" << a << "][" << next << "] = " << p
              << " is not a probability";
          return err.str();
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kSimplexTol) {
        err.precision(17);
        err << "transitions[" << s << "][" << a << "] sums to " << sum << ", expected 1";
        return err.str();
      }
    }
  }
  return std::nullopt;
}

Mdp::Mdp(Table rewards, Eigen::MatrixXd transitions, double gamma)
    : rewards_(std::move(rewards)), transitions_(std::move(transitions)), gamma_(gamma) {
  if (auto violation = find_violation(rewards_, transitions_, gamma_)) {
    throw std::invalid_argument("invalid MDP: " + *violation);
  }
}

double Mdp::value_bound() const { return rewards_.cwiseAbs().maxCoeff() / (1.0 - gamma_); }

StateDistribution::StateDistribution(Vector weights) : weights_(std::move(weights)) {
  require(weights_.size() > 0, "state distribution must be non-empty");
  for (Eigen::Index s = 0; s < weights_.size(); ++s) {
    require(std::isfinite(weights_(s)) && weights_(s) >= 0.0,
            "mu[" + std::to_string(s) + "] is not a probability");
  }
  require(std::abs(weights_.sum() - 1.0) <= kSimplexTol, "mu does not sum to 1");
}

StateDistribution StateDistribution::uniform(int num_states) {
  return StateDistribution(Vector::Constant(num_states, 1.0 / num_states));
}

StateDistribution StateDistribution::point_mass(int num_states, int state) {
  Vector w = Vector::Zero(num_states);
  w(state) = 1.0;
  return StateDistribution(std::move(w));
}

std::optional<std::string> simplex_row_violation(const Table& rows, double tol) {
  for (Eigen::Index s = 0; s < rows.rows(); ++s) {
    double sum = 0.0;
    for (Eigen::Index a = 0; a < rows.cols(); ++a) {
      const double p = rows(s, a);
      if (!std::isfinite(p) || p < 0.0) {
        return "row " + std::to_string(s) + " entry " + std::to_string(a) +
               " is not a probability";
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream err;
      err.precision(17);
      err << "row " << s << " sums to " << sum;
      return err.str();
    }
  }
  return std::nullopt;
}

Policy::Policy(Table probs) : probs_(std::move(probs)) {
  require(probs_.rows() > 0 && probs_.cols() > 0, "policy must be non-empty");
  if (auto violation = simplex_row_violation(probs_)) {
    throw std::invalid_argument("invalid policy: " + *violation);
  }
}

Policy Policy::uniform(int num_states, int num_actions) {
  return Policy(Table::Constant(num_states, num_actions, 1.0 / num_actions));
}

Policy Policy::deterministic(const std::vector<int>& actions, int num_actions) {
  Table probs = Table::Zero(static_cast<Eigen::Index>(actions.size()), num_actions);
  for (std::size_t s = 0; s < actions.size(); ++s) {
    require(actions[s] >= 0 && actions[s] < num_actions, "action index out of range");
    probs(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
  }
  return Policy(std::move(probs));
}

bool Policy::operator==(const Policy& other) const {
  return probs_.rows() == other.probs_.rows() && probs_.cols() == other.probs_.cols() &&
         (probs_.array() == other.probs_.array()).all();
}

double total_variation(const Table& p, const Table& q) {
  require(p.rows() == q.rows() && p.cols() == q.cols(), "total_variation: shape mismatch");
  double worst = 0.0;
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    worst = std::max(worst, 0.5 * (p.row(s) - q.row(s)).cwiseAbs().sum());
  }
  return worst;
}

PolicyModel policy_kernel_and_reward(const Mdp& mdp, const Policy& pi) {
  require_policy_shape(mdp, pi);
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();
  PolicyModel model{Eigen::MatrixXd::Zero(ns, ns), Vector::Zero(ns)};
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      const double w = pi(s, a);
      model.kernel.row(s) += w * mdp.transitions().row(static_cast<Eigen::Index>(s) * na + a);
      model.reward(s) += w * mdp.reward(s, a);
    }
  }
  return model;
}

QFunction q_from_v(const Mdp& mdp, const ValueFunction& v) {
  require_value_size(mdp, v);
  const Vector next = mdp.transitions() * v.values;
  QFunction q{Table(mdp.num_states(), mdp.num_actions())};
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      q.values(s, a) =
          mdp.reward(s, a) + mdp.gamma() * next(static_cast<Eigen::Index>(s) * mdp.num_actions() + a);
    }
  }
  return q;
}

Vector expected_under(const Policy& pi, const Table& q) {
  require(pi.num_states() == q.rows() && pi.num_actions() == q.cols(),
          "expected_under: shape mismatch");
  Vector out(q.rows());
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    double acc = 0.0;
    for (Eigen::Index a = 0; a < q.cols(); ++a) acc += pi.probs()(s, a) * q(s, a);
    out(s) = acc;
  }
  return out;
}

ValueFunction bellman_eval(const Mdp& mdp, const Policy& pi, const ValueFunction& v) {
  require_policy_shape(mdp, pi);
  return {expected_under(pi, q_from_v(mdp, v).values)};
}

ValueFunction bellman_optimal(const Mdp& mdp, const ValueFunction& v) {
  const Table q = q_from_v(mdp, v).values;
  Vector out(q.rows());
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    double best = q(s, 0);
    for (Eigen::Index a = 1; a < q.cols(); ++a) {
      if (q(s, a) > best) best = q(s, a);
    }
    out(s) = best;
  }
  return {out};
}

ValueFunction policy_value(const Mdp& mdp, const Policy& pi) {
  const PolicyModel model = policy_kernel_and_reward(mdp, pi);
  const int ns = mdp.num_states();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(ns, ns) - mdp.gamma() * model.kernel;
  if (!system.allFinite() || !model.reward.allFinite()) {
    throw std::runtime_error("policy_value: non-finite input");
  }
  Vector v = system.partialPivLu().solve(model.reward);
  if (!v.allFinite()) throw std::runtime_error("policy_value: linear solve failed");
  const double residual = (model.reward + mdp.gamma() * model.kernel * v - v).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * (1.0 + v.cwiseAbs().maxCoeff())) {
    throw std::runtime_error("policy_value: residual " + std::to_string(residual) +
                             " exceeds tolerance");
  }
  return {std::move(v)};
}

QFunction policy_q(const Mdp& mdp, const Policy& pi) {
  return q_from_v(mdp, policy_value(mdp, pi));
}

QFunction bellman_eval_q(const Mdp& mdp, const Policy& pi, const QFunction& q) {
  require_policy_shape(mdp, pi);
  require_table_shape(mdp, q.values, "q");
  return q_from_v(mdp, {expected_under(pi, q.values)});
}

QFunction partial_eval(const Mdp& mdp, const Policy& pi, const QFunction& q_prev, int m) {
  require(m >= 1, "partial_eval: m must be at least 1");
  QFunction q = q_prev;
  for (int i = 0; i < m; ++i) q = bellman_eval_q(mdp, pi, q);
  return q;
}

std::vector<int> greedy_actions(const Table& q) {
  std::vector<int> actions(static_cast<std::size_t>(q.rows()), 0);
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    require(q.row(s).allFinite(), "greedy: q row " + std::to_string(s) + " is not finite");
    Eigen::Index best = 0;
    for (Eigen::Index a = 1; a < q.cols(); ++a) {
      if (q(s, a) > q(s, best)) best = a;
    }
    actions[static_cast<std::size_t>(s)] = static_cast<int>(best);
  }
  return actions;
}

Policy greedy(const QFunction& q) {
  return Policy::deterministic(greedy_actions(q.values), static_cast<int>(q.values.cols()));
}

double objective_j(const Mdp& mdp, const Policy& pi, const StateDistribution& mu) {
  require(mu.size() == mdp.num_states(), "objective_j: mu size mismatch");
  return mu.weights().dot(policy_value(mdp, pi).values);
}

Occupancy occupancy(const Mdp& mdp, const Policy& pi, const StateDistribution& mu) {
  require(mu.size() == mdp.num_states(), "occupancy: mu size mismatch");
  const PolicyModel model = policy_kernel_and_reward(mdp, pi);
  const int ns = mdp.num_states();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(ns, ns) - mdp.gamma() * model.kernel.transpose();
  if (!system.allFinite()) throw std::runtime_error("occupancy: non-finite input");
  Vector d = system.partialPivLu().solve((1.0 - mdp.gamma()) * mu.weights());
  if (!d.allFinite()) throw std::runtime_error("occupancy: linear solve failed");
  // Round-off can leave unreachable states at -1e-17.
  return {d.cwiseMax(0.0)};
}

double weighted_inner(const StateDistribution& mu, const Table& a, const Table& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "weighted_inner: shape mismatch");
  require(a.rows() == mu.size(), "weighted_inner: mu size mismatch");
  double total = 0.0;
  for (Eigen::Index s = 0; s < a.rows(); ++s) {
    total += mu.weights()(s) * a.row(s).dot(b.row(s));
  }
  return total;
}

}  // namespace dpopt
