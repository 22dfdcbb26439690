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
#include <string_view>
#include <vector>

#include "dpopt/mdp.hpp"
#include "dpopt/regularizer.hpp"

namespace dpopt {

enum class Scheme { PI, VI, MPI, CPI, CPI_MPI, MD_MPI, POLITEX };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/**
Configuration of one dynamic-programming run.

Every scheme alternates an evaluation step and an improvement step. Record k
holds the policy pi_k and the value iterate obtained by evaluating it:

  exact evaluation (m = infinity):  q_k = q_{pi_k}
  v-based partial (VI, MPI):        v_k = T_{pi_k}^m v_{k-1},  v_{-1} = initial_value
  q-based partial (CPI_MPI, ...):   q_k = T_{pi_k}^m q_{k-1},  q_{-1} = 0

pi_0 defaults to the uniform policy and v_{-1} to zero.
*/
struct SchemeSpec {
  Scheme scheme = Scheme::PI;
  StepConfig step;
  std::optional<Regularizer> omega;
  std::optional<StateDistribution> mu;  // uniform when absent
  int max_iters = 1000;
  double stop_tol = 1e-8;

  std::optional<Policy> initial_policy;
  std::optional<Vector> initial_value;

  /// Throws std::invalid_argument when the parameters do not fit the scheme.
  void validate(const Mdp& mdp) const;
};

struct IterationRecord {
  int iter = 0;
  Policy policy;
  QFunction q;
  ValueFunction v;
  double objective = 0.0;         // J(pi_k) under mu, exact
  double bellman_residual = 0.0;  // |T_* v_k - v_k|_inf
  double policy_delta_tv = 0.0;   // TV(pi_k, pi_{k-1}); 0 for k = 0
};

enum class StopReason { Converged, MaxIters };

struct RunTrace {
  Scheme scheme = Scheme::PI;
  std::vector<IterationRecord> iterates;
  int terminated_at = 0;
  StopReason reason = StopReason::MaxIters;

  const IterationRecord& final() const { return iterates.back(); }
};

RunTrace run_pi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_vi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_mpi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_cpi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_cpi_mpi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_md_mpi(const Mdp& mdp, const SchemeSpec& spec);
RunTrace run_politex(const Mdp& mdp, const SchemeSpec& spec);

/// Dispatches on spec.scheme.
RunTrace run_scheme(const Mdp& mdp, const SchemeSpec& spec);

/// CSV with header `iter,scheme,J,bellman_residual,policy_delta_tv`.
std::string trace_csv(const RunTrace& trace);

}  // namespace dpopt
