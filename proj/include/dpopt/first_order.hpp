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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpopt/mdp.hpp"
#include "dpopt/regularizer.hpp"

// First-order methods for maximizing a concave f over a product of simplices
// X = Delta_A x ... x Delta_A. A point is a Table with one block per row; the
// inner product is the plain sum over all entries.
namespace dpopt {

/// Which gradient an oracle returns. The MDP oracle returns q_pi, which plays
/// the role of the natural gradient of J; every other shipped oracle is vanilla.
enum class GradientKind { Vanilla, Natural };

struct OracleResult {
  std::optional<double> value;
  Table gradient;
};

struct GradientOracle {
  std::function<OracleResult(const Table&)> eval;
  GradientKind kind = GradientKind::Vanilla;
};

/// x_0, x_1, ..., x_iters.
using Iterates = std::vector<Table>;

/// x_{k+1} = x_k + eta g_k. Iterates may leave X.
Iterates gradient_ascent(const GradientOracle& oracle, const Table& x0, double eta, int iters);

/// x_{k+1} = Proj_X(x_k + eta g_k), projection applied per block.
Iterates projected_gradient_ascent(const GradientOracle& oracle, const Table& x0, double eta,
                                   int iters);

/// s_k = argmax_{s in X} <s, g_k> (per-block one-hot, lowest index on ties);
/// x_{k+1} = (1 - alpha) x_k + alpha s_k.
Iterates frank_wolfe(const GradientOracle& oracle, const Table& x0, double alpha, int iters);

/// x_{k+1} = argmax_{x in X} eta <x, g_k> - sum_b w_b D_Omega(x_b || x_k,b).
/// Block weights default to 1.
Iterates mirror_descent(const GradientOracle& oracle, const Table& x0, double eta,
                        Regularizer omega, int iters, const Vector& block_weights = Vector());

/// x_{k+1} = argmax_{x in X} eta <x, sum_{j<=k} g_j> - sum_b w_b Omega(x_b).
/// Block weights default to 1.
Iterates dual_averaging(const GradientOracle& oracle, const Table& x0, double eta,
                        Regularizer omega, int iters, const Vector& block_weights = Vector());

/// Largest per-block deviation from the simplex (negative mass or |sum - 1|).
double feasibility_error(const Table& x);

/// Frank-Wolfe gap <s - x, g> with s the linear maximizer of <., g>.
double frank_wolfe_gap(const Table& x, const Table& g);

/// The linear maximization oracle: per-block one-hot at the argmax.
Table linear_maximizer(const Table& g);

/// CSV with header `iter,objective,feasibility_err,step_norm`. The objective
/// column is empty when the oracle returns no value.
std::string iterates_csv(const GradientOracle& oracle, const Iterates& iterates);

namespace objectives {

/// f(x) = -0.5 |x - c|^2, gradient c - x.
GradientOracle concave_quadratic(Table center);

/// f(x) = <x, c>, gradient c.
GradientOracle linear(Table c);

/// f(x) = <x, c> - tau sum x log x, gradient c - tau (log x + 1). Needs x > 0.
GradientOracle entropy_regularized_linear(Table c, double tau);

}  // namespace objectives

}  // namespace dpopt
