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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dpopt/mdp.hpp"

// MDP files are JSON objects:
//
//   {
//     "num_states": 2, "num_actions": 1, "gamma": 0.9,
//     "rewards": [[1.0], [0.0]],                 // [s][a]
//     "transitions": [[[0.0, 1.0]], [[1.0, 0.0]]],  // [s][a][s']
//     "mu": [0.5, 0.5]                            // optional
//   }
namespace dpopt {

class MdpFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedMdp {
  Mdp mdp;
  std::optional<StateDistribution> mu;
};

/// Parses and validates; throws MdpFormatError naming the first violation.
LoadedMdp parse_mdp(std::string_view text);
LoadedMdp load_mdp(const std::filesystem::path& path);

std::string mdp_to_json(const Mdp& mdp, const std::optional<StateDistribution>& mu = std::nullopt);

}  // namespace dpopt
