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

#include "dpopt/garnet.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpopt/rng.hpp"

namespace dpopt {

void GarnetSpec::validate() const {
  if (num_states < 1 || num_actions < 1) {
    throw std::invalid_argument("garnet: num_states and num_actions must be positive");
  }
  if (branching_factor < 1 || branching_factor > num_states) {
    throw std::invalid_argument("garnet: branching_factor must be in [1, num_states]");
  }
  if (!(reward_sparsity >= 0.0 && reward_sparsity <= 1.0)) {
    throw std::invalid_argument("garnet: reward_sparsity must be in [0, 1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("garnet: gamma must be in (0, 1)");
  }
}

Mdp generate_garnet(const GarnetSpec& spec) {
  spec.validate();
  const int ns = spec.num_states;
  const int na = spec.num_actions;
  SplitMix64 rng(spec.seed);

  Eigen::MatrixXd transitions = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ns) * na, ns);
  std::vector<int> states(static_cast<std::size_t>(ns));
  std::vector<double> weights(static_cast<std::size_t>(spec.branching_factor));
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      std::iota(states.begin(), states.end(), 0);
      for (int i = 0; i < spec.branching_factor; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(ns - i)));
        std::swap(states[static_cast<std::size_t>(i)], states[j]);
      }
      double total = 0.0;
      for (auto& w : weights) {
        w = rng.uniform_positive();
        total += w;
      }
      const Eigen::Index row = static_cast<Eigen::Index>(s) * na + a;
      for (int i = 0; i < spec.branching_factor; ++i) {
        transitions(row, states[static_cast<std::size_t>(i)]) =
            weights[static_cast<std::size_t>(i)] / total;
      }
    }
  }

  Table rewards(ns, na);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      const double r = rng.normal();
      rewards(s, a) = rng.uniform() < spec.reward_sparsity ? 0.0 : r;
    }
  }
  return Mdp(std::move(rewards), std::move(transitions), spec.gamma);
}

}  // namespace dpopt
