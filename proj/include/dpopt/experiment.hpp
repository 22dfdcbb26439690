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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpopt/correspondence.hpp"
#include "dpopt/garnet.hpp"
#include "dpopt/schemes.hpp"

namespace dpopt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckSpec {
  Pair pair = Pair::FwCpi;
  double alpha = 0.3;
  double eta = 0.5;
  Regularizer omega = Regularizer::NegativeEntropy;
  int iters = 100;
};

/// Default parameters for a check by pair name.
CheckSpec default_check(Pair pair);

/**
One batch of runs. The MDP source is either a file or a Garnet family; with a
Garnet family every scheme and check runs once per seed.

JSON layout (field names are exact):

  {
    "mdp": "relative/or/absolute.json",            // or
    "garnet": {"num_states": 5, "num_actions": 3, "branching_factor": 2,
               "reward_sparsity": 0.0, "gamma": 0.9, "seeds": [1, 2]},
    "schemes": [{"scheme": "CPI", "alpha": 0.3, "max_iters": 300, "stop_tol": 1e-8},
                {"scheme": "MD_MPI", "eta": 1.0, "omega": "kl", "m": "inf"}],
    "checks": ["FW-CPI", {"pair": "DA-POLITEX", "eta": 0.1, "omega": "kl", "iters": 100}],
    "output_dir": "out"
  }

Relative paths resolve against the directory holding the config file.
*/
struct ExperimentConfig {
  std::optional<std::filesystem::path> mdp_file;
  std::optional<GarnetSpec> garnet;
  std::vector<std::uint64_t> seeds;
  std::vector<SchemeSpec> schemes;
  std::vector<CheckSpec> checks;
  std::filesystem::path output_dir;

  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentSummary {
  int runs = 0;
  int checks_total = 0;
  int checks_passed = 0;
  std::vector<std::filesystem::path> files;

  bool all_checks_passed() const { return checks_passed == checks_total; }
};

/// Writes one trace CSV per scheme run under `<output_dir>/traces/`, then
/// `equivalence.csv`, then `summary.csv` with columns
/// `kind,name,seed,iterations,final_J,final_residual,max_policy_tv_gap,max_objective_gap,status`.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Parses "inf" / "infinity" or a positive integer.
std::optional<EvalDepth> parse_depth(std::string_view text);

}  // namespace dpopt
