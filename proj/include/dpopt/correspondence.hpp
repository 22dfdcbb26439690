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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dpopt/first_order.hpp"
#include "dpopt/mdp.hpp"
#include "dpopt/regularizer.hpp"

// Runs each optimization method with g_k = q_{pi_k} next to its dynamic
// programming counterpart and measures how far the two iterate sequences are:
//
//   Frank-Wolfe      <-> conservative policy iteration
//   mirror descent   <-> MD-MPI with exact evaluation
//   dual averaging   <-> Politex (discounted)
namespace dpopt {

inline constexpr double kEquivalenceTol = 1e-12;

enum class Pair { FwCpi, MdMdMpi, DaPolitex };

std::string_view to_string(Pair pair);
/// Accepts "FW-CPI", "MD-MD_MPI", "DA-POLITEX" (case-insensitive, '_' or '-').
std::optional<Pair> parse_pair(std::string_view name);

struct EquivalenceReport {
  Pair pair = Pair::FwCpi;
  int iterations_compared = 0;
  double max_policy_tv_gap = 0.0;
  double max_objective_gap = 0.0;
  double tolerance = kEquivalenceTol;
  GradientKind oracle_kind = GradientKind::Natural;
  bool passed = false;
};

/// Oracle that reads a point as a policy and returns (J(pi), q_pi).
GradientOracle natural_oracle(const Mdp& mdp, const StateDistribution& mu);

EquivalenceReport verify_cpi_fw(const Mdp& mdp, const StateDistribution& mu, double alpha,
                                int iters);
EquivalenceReport verify_mdmpi_md(const Mdp& mdp, const StateDistribution& mu, double eta,
                                  Regularizer omega, int iters);
EquivalenceReport verify_politex_da(const Mdp& mdp, const StateDistribution& mu, double eta,
                                    Regularizer omega, int iters);

/// `pair,seed,iters,max_policy_tv_gap,max_objective_gap,passed`
std::string equivalence_csv_header();
std::string equivalence_csv_row(const EquivalenceReport& report, std::uint64_t seed);

struct NaturalGradientReport {
  Table vanilla_gradient;      // dJ/dtheta by central differences
  Table natural_gradient;      // F^+ dJ/dtheta
  Table q;                     // q_pi
  Vector per_state_deviation;  // std over actions of natural - q / (1 - gamma)
  double max_deviation = 0.0;
  Eigen::Index fisher_rank = 0;
  Eigen::Index expected_rank = 0;  // |S| (|A| - 1) for an interior policy
  bool rank_as_expected = false;
  double measured_scale = 0.0;  // least-squares slope of centered natural vs centered q
};

/**
Checks that the natural gradient of J under a softmax policy
pi(a|s) ~ exp(theta(s,a)) equals q_pi / (1 - gamma) up to a per-state constant.

The vanilla gradient comes from central finite differences (step 1e-6) on
theta. The Fisher matrix is weighted by the discounted occupancy d_{mu,pi}:
F = sum_s d(s) sum_a pi(a|s) grad log pi(a|s) grad log pi(a|s)^T. The natural
gradient is the minimum-norm solution F^+ grad J.

Throws std::invalid_argument if mu or d_{mu,pi} is not strictly positive.
*/
NaturalGradientReport check_natural_gradient(const Mdp& mdp, const StateDistribution& mu,
                                             const Table& logits);

/// Row-wise softmax of a logit table.
Policy softmax_policy(const Table& logits);

}  // namespace dpopt
