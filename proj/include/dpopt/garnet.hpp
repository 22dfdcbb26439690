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

#include "dpopt/mdp.hpp"

namespace dpopt {

struct GarnetSpec {
  int num_states = 5;
  int num_actions = 3;
  int branching_factor = 2;
  double reward_sparsity = 0.0;
  std::uint64_t seed = 0;
  double gamma = 0.9;

  void validate() const;
};

/**
Random Garnet MDP, fully determined by the spec.

Draw order from one SplitMix64 stream seeded with `seed`:
 1. for s in states, for a in actions: pick `branching_factor` distinct next
    states with a partial Fisher-Yates shuffle of (0..|S|-1) (j = i + below(|S| - i),
    swap), then draw one uniform_positive() weight per picked state in pick
    order and normalize;
 2. for s in states, for a in actions: reward = normal(); then if
    uniform() < reward_sparsity the reward is set to 0.
*/
Mdp generate_garnet(const GarnetSpec& spec);

}  // namespace dpopt
