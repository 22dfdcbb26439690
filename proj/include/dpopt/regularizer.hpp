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
#include <string_view>

#include "dpopt/mdp.hpp"

namespace dpopt {

/// Convex potential on the action simplex.
///   NegativeEntropy:  Omega(x) = sum_a x_a log x_a   (divergence: KL)
///   HalfSquaredNorm:  Omega(x) = 0.5 |x|^2           (divergence: 0.5 |x - x'|^2)
enum class Regularizer { NegativeEntropy, HalfSquaredNorm };

std::string_view to_string(Regularizer omega);
/// Accepts "kl", "entropy", "negative_entropy", "euclid", "l2", "half_squared_norm".
std::optional<Regularizer> parse_regularizer(std::string_view name);

/// Evaluation depth m for partial policy evaluation; `exact()` is m = infinity.
class EvalDepth {
 public:
  static EvalDepth exact() { return EvalDepth(0); }
  static EvalDepth steps(int m);

  bool is_exact() const { return steps_ == 0; }
  int steps() const { return steps_; }

  bool operator==(const EvalDepth&) const = default;

 private:
  explicit EvalDepth(int steps) : steps_(steps) {}
  int steps_;
};

/// Step parameters; which fields are required depends on the scheme.
struct StepConfig {
  std::optional<double> eta;    // learning rate, > 0
  std::optional<double> alpha;  // mixture rate, in (0, 1]
  std::optional<EvalDepth> m;   // evaluation depth

  /// Throws std::invalid_argument when a present field is out of range.
  void validate() const;
};

double potential(Regularizer omega, const Vector& x);
Vector potential_gradient(Regularizer omega, const Vector& x);

/// Omega(pi) = sum_s mu(s) Omega(pi(.|s)).
double aggregated_potential(Regularizer omega, const Policy& pi, const StateDistribution& mu);

/// D_Omega(x || x_prev) via its closed form. For NegativeEntropy, 0 log 0 = 0
/// and a coordinate with x_a > 0 = x_prev_a throws std::domain_error.
double bregman(Regularizer omega, const Vector& x, const Vector& x_prev);

/// Euclidean projection onto the probability simplex (sort and threshold).
Vector simplex_projection(const Vector& y);

/// Single-row solution of argmax_x eta <x, g> - D_Omega(x || prev).
/// With NegativeEntropy, zero entries of `prev` stay zero (the divergence
/// would otherwise be infinite).
Vector md_row(Regularizer omega, const Vector& g, const Vector& prev, double eta);

/// Single-row solution of argmax_x eta <x, sum> - Omega(x).
Vector da_row(Regularizer omega, const Vector& sum, double eta);

/// Regularized greedy step argmax_pi eta <pi, q>_mu - D_Omega(pi || pi_prev).
/// Decomposes per state for any strictly positive mu.
Policy md_step(const QFunction& q, const Policy& pi_prev, double eta, Regularizer omega,
               const StateDistribution& mu);

/// Regularized greedy step against an accumulated table:
/// argmax_pi eta <pi, q_sum>_mu - Omega(pi).
Policy da_step(const Table& q_sum, double eta, Regularizer omega, const StateDistribution& mu);

/// Row-wise (1 - alpha) x + alpha target.
Table convex_mixture(const Table& x, const Table& target, double alpha);

}  // namespace dpopt
