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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace dpopt {
namespace {

using testing::garnet;
using testing::max_abs_diff;
using testing::one_state_mdp;
using testing::random_policy;

Mdp two_action_fork() {
  // From state 0, action 0 goes to 1 and action 1 goes to 2. States 1, 2 absorb.
  Table r = Table::Zero(3, 2);
  r(0, 0) = 1.0;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(6, 3);
  p(0, 1) = 1.0;
  p(1, 2) = 1.0;
  p(2, 1) = p(3, 1) = 1.0;
  p(4, 2) = p(5, 2) = 1.0;
  return Mdp(r, p, 0.9);
}

// --- construction -----------------------------------------------------------

TEST(MdpTest, RejectsRowThatDoesNotSumToOne) {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.4, 0.5, 0.5;
  try {
    Mdp(Table::Zero(2, 1), p, 0.9);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("transitions[0][0]"), std::string::npos) << e.what();
  }
}

TEST(MdpTest, RejectsNegativeEntryAndBadGamma) {
  EXPECT_THROW(Mdp(Table::Zero(2, 1), Eigen::MatrixXd::Identity(2, 2), 1.0), std::invalid_argument);
  EXPECT_THROW(Mdp(Table::Zero(2, 1), Eigen::MatrixXd::Identity(2, 2), 0.0), std::invalid_argument);
  Eigen::MatrixXd q(2, 2);
  q << 1.5, -0.5, 0.0, 1.0;
  EXPECT_THROW(Mdp(Table::Zero(2, 1), q, 0.5), std::invalid_argument);
}

TEST(MdpTest, RejectsNonFiniteReward) {
  Table r = Table::Zero(1, 1);
  r(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Mdp(r, Eigen::MatrixXd::Ones(1, 1), 0.5), std::invalid_argument);
}

TEST(PolicyTest, RejectsRowsOffTheSimplex) {
  Table p(1, 2);
  p << 0.6, 0.6;
  EXPECT_THROW(Policy{p}, std::invalid_argument);
  p << 1.1, -0.1;
  EXPECT_THROW(Policy{p}, std::invalid_argument);
  EXPECT_NO_THROW(Policy::deterministic({1, 0}, 2));
  EXPECT_THROW(Policy::deterministic({2}, 2), std::invalid_argument);
}

TEST(StateDistributionTest, ValidatesSimplex) {
  EXPECT_THROW(StateDistribution(Vector::Constant(2, 0.6)), std::invalid_argument);
  EXPECT_TRUE(StateDistribution::uniform(3).strictly_positive());
  EXPECT_FALSE(StateDistribution::point_mass(3, 1).strictly_positive());
}

// --- policy model -----------------------------------------------------------

TEST(PolicyKernelTest, SingleActionIgnoresPolicy) {
  const Mdp mdp = garnet(3, 4, 1, 2);
  const auto model = policy_kernel_and_reward(mdp, Policy::uniform(4, 1));
  EXPECT_EQ(model.kernel, mdp.transitions());
  EXPECT_EQ(model.reward, mdp.rewards().col(0));
}

TEST(PolicyKernelTest, UniformOverDistinctPointMasses) {
  const auto model = policy_kernel_and_reward(two_action_fork(), Policy::uniform(3, 2));
  EXPECT_DOUBLE_EQ(model.kernel(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(model.kernel(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(model.reward(0), 0.5);
}

TEST(PolicyKernelTest, MatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  const Mdp mdp = garnet(5, 3, 2, 3);
  const Policy pi = random_policy(rng, 3, 2);
  const auto model = policy_kernel_and_reward(mdp, pi);
  for (int s = 0; s < 3; ++s) {
    double r = 0.0;
    for (int a = 0; a < 2; ++a) r += pi(s, a) * mdp.reward(s, a);
    EXPECT_NEAR(model.reward(s), r, 1e-15);
    for (int t = 0; t < 3; ++t) {
      double p = 0.0;
      for (int a = 0; a < 2; ++a) p += pi(s, a) * mdp.transition(s, a, t);
      EXPECT_NEAR(model.kernel(s, t), p, 1e-15);
    }
  }
}

// --- Bellman operators ------------------------------------------------------

TEST(BellmanTest, ZeroRewardZeroValue) {
  Mdp zero(Table::Zero(3, 2), garnet(1, 3, 2, 2).transitions(), 0.9);
  const auto out = bellman_eval(zero, Policy::uniform(3, 2), {Vector::Zero(3)});
  EXPECT_EQ(out.values, Vector::Zero(3));
}

TEST(BellmanTest, OneStateOneActionStep) {
  const Mdp mdp = one_state_mdp({1.0}, 0.5);
  EXPECT_DOUBLE_EQ(bellman_eval(mdp, Policy::uniform(1, 1), {Vector::Zero(1)}).values(0), 1.0);
  EXPECT_DOUBLE_EQ(policy_value(mdp, Policy::uniform(1, 1)).values(0), 2.0);
  EXPECT_DOUBLE_EQ(policy_q(mdp, Policy::uniform(1, 1)).values(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(objective_j(mdp, Policy::uniform(1, 1), StateDistribution::uniform(1)), 2.0);
}

TEST(BellmanTest, PolicyValueIsFixedPoint) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mdp mdp = garnet(seed, 5, 3, 3);
    const Policy pi = random_policy(rng, 5, 3);
    const ValueFunction v = policy_value(mdp, pi);
    EXPECT_LE((bellman_eval(mdp, pi, v).values - v.values).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE(v.values.lpNorm<Eigen::Infinity>(), mdp.value_bound() + 1e-12);
  }
}

TEST(BellmanTest, OptimalOnSingleActionEqualsEval) {
  const Mdp mdp = garnet(4, 4, 1, 2);
  const ValueFunction v{Vector::LinSpaced(4, -1.0, 2.0)};
  EXPECT_EQ(bellman_optimal(mdp, v).values, bellman_eval(mdp, Policy::uniform(4, 1), v).values);
}

TEST(BellmanTest, OptimalValueIsFixedPoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mdp mdp = garnet(seed, 3, 2, 2);
    const Vector vstar = Eigen::Map<const Vector>(
        testing::brute_force_optimal_value(mdp).data(), 3);
    EXPECT_LE((bellman_optimal(mdp, {vstar}).values - vstar).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(BellmanTest, Contraction) {
  std::mt19937_64 rng(5);
  const Mdp mdp = garnet(8, 5, 3, 3);
  const Policy pi = random_policy(rng, 5, 3);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector v(5), w(5);
    for (int s = 0; s < 5; ++s) {
      v(s) = n(rng);
      w(s) = n(rng);
    }
    const double gap = (v - w).lpNorm<Eigen::Infinity>();
    const double opt =
        (bellman_optimal(mdp, {v}).values - bellman_optimal(mdp, {w}).values).lpNorm<Eigen::Infinity>();
    const double ev =
        (bellman_eval(mdp, pi, {v}).values - bellman_eval(mdp, pi, {w}).values).lpNorm<Eigen::Infinity>();
    EXPECT_LE(opt, mdp.gamma() * gap + 1e-12);
    EXPECT_LE(ev, mdp.gamma() * gap + 1e-12);
  }
}

// --- evaluation -------------------------------------------------------------

TEST(PolicyValueTest, ConstantReward) {
  Mdp mdp(Table::Constant(3, 2, 1.5), garnet(2, 3, 2, 2).transitions(), 0.8);
  const Vector v = policy_value(mdp, Policy::uniform(3, 2)).values;
  for (int s = 0; s < 3; ++s) EXPECT_NEAR(v(s), 1.5 / 0.2, 1e-10);
}

TEST(PolicyValueTest, MatchesGaussianEliminationAndIteration) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mdp mdp = garnet(seed, 4, 3, 3);
    const Policy pi = random_policy(rng, 4, 3);
    const Vector v = policy_value(mdp, pi).values;
    EXPECT_LE(max_abs_diff(testing::oracle_value(mdp, pi.probs()), v), 1e-10);
    EXPECT_LE(max_abs_diff(testing::iterate_value(mdp, pi.probs(), 10000), v), 1e-8);
  }
}

TEST(QFromVTest, ZeroAndConstantValue) {
  const Mdp mdp = garnet(6, 3, 2, 2);
  EXPECT_EQ(q_from_v(mdp, {Vector::Zero(3)}).values, mdp.rewards());
  const Table q = q_from_v(mdp, {Vector::Constant(3, 4.0)}).values;
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(q(s, a), mdp.reward(s, a) + 0.9 * 4.0, 1e-14);
}

TEST(QFromVTest, PolicyAverageOfQIsV) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mdp mdp = garnet(seed, 4, 3, 2);
    const Policy pi = random_policy(rng, 4, 3);
    const Vector v = policy_value(mdp, pi).values;
    const Table q = policy_q(mdp, pi).values;
    for (int s = 0; s < 4; ++s) {
      double avg = 0.0;
      for (int a = 0; a < 3; ++a) avg += pi(s, a) * q(s, a);
      EXPECT_NEAR(avg, v(s), 1e-10);
    }
  }
}

TEST(PartialEvalTest, OneStepFromZeroIsReward) {
  const Mdp mdp = garnet(9, 3, 2, 2);
  const Table q = partial_eval(mdp, Policy::uniform(3, 2), {Table::Zero(3, 2)}, 1).values;
  EXPECT_EQ(q, mdp.rewards());
  EXPECT_THROW(partial_eval(mdp, Policy::uniform(3, 2), {Table::Zero(3, 2)}, 0), std::invalid_argument);
}

TEST(PartialEvalTest, ConvergesToPolicyQ) {
  std::mt19937_64 rng(29);
  const Mdp mdp = garnet(12, 4, 2, 3);
  const Policy pi = random_policy(rng, 4, 2);
  const Table exact = policy_q(mdp, pi).values;
  EXPECT_LE((partial_eval(mdp, pi, {Table::Zero(4, 2)}, 200).values - exact).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_LE((partial_eval(mdp, pi, {Table::Zero(4, 2)}, 500).values - exact).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(PartialEvalTest, OneStepThenGreedyIsValueIterationOnQ) {
  const Mdp mdp = garnet(13, 4, 3, 2);
  std::mt19937_64 rng(31);
  const Table q = testing::random_table(rng, 4, 3);
  const Policy g = greedy({q});
  const Table next = partial_eval(mdp, g, {q}, 1).values;
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 3; ++a) {
      double cont = 0.0;
      for (int t = 0; t < 4; ++t) cont += mdp.transition(s, a, t) * q.row(t).maxCoeff();
      EXPECT_NEAR(next(s, a), mdp.reward(s, a) + mdp.gamma() * cont, 1e-12);
    }
}

// --- greedy -----------------------------------------------------------------

TEST(GreedyTest, PicksArgmaxWithLowestIndexTieBreak) {
  Table q(3, 2);
  q << 1, 0, 0.5, 0.5, -1, 2;
  const Policy g = greedy({q});
  EXPECT_EQ(g, Policy::deterministic({0, 0, 1}, 2));
}

TEST(GreedyTest, MatchesExhaustiveMax) {
  std::mt19937_64 rng(37);
  const Table q = testing::random_table(rng, 20, 4);
  const auto actions = greedy_actions(q);
  for (int s = 0; s < 20; ++s) {
    for (int a = 0; a < 4; ++a) EXPECT_GE(q(s, actions[s]), q(s, a));
  }
}

TEST(GreedyTest, GreedyOnOptimalQIsOptimal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mdp mdp = garnet(seed, 3, 2, 2);
    const auto vstar = testing::brute_force_optimal_value(mdp);
    const Vector vs = Eigen::Map<const Vector>(vstar.data(), 3);
    const Policy pistar = greedy(q_from_v(mdp, {vs}));
    const Policy again = greedy(policy_q(mdp, pistar));
    EXPECT_EQ(again, pistar);
    EXPECT_LE(max_abs_diff(vstar, policy_value(mdp, pistar).values), 1e-10);
  }
}

TEST(PolicyImprovementTest, GreedyNeverWorse) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Mdp mdp = garnet(1000 + trial, 4, 3, 2);
    const Policy pi = random_policy(rng, 4, 3);
    const Vector before = policy_value(mdp, pi).values;
    const Vector after = policy_value(mdp, greedy(policy_q(mdp, pi))).values;
    EXPECT_TRUE(((after - before).array() >= -1e-10).all());
  }
}

// --- objective and occupancy ------------------------------------------------

TEST(ObjectiveTest, PointMassPicksState) {
  std::mt19937_64 rng(43);
  const Mdp mdp = garnet(14, 4, 2, 2);
  const Policy pi = random_policy(rng, 4, 2);
  EXPECT_NEAR(objective_j(mdp, pi, StateDistribution::point_mass(4, 2)),
              policy_value(mdp, pi).values(2), 1e-14);
}

TEST(ObjectiveTest, OptimalPolicyMaximizesJ) {
  const Mdp mdp = garnet(15, 4, 3, 2);
  const auto vstar = testing::brute_force_optimal_value(mdp);
  const Policy pistar = greedy(q_from_v(mdp, {Eigen::Map<const Vector>(vstar.data(), 4)}));
  const auto mu = StateDistribution::uniform(4);
  const double jstar = objective_j(mdp, pistar, mu);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_GE(jstar, objective_j(mdp, random_policy(rng, 4, 3), mu) - 1e-10);
  }
}

TEST(OccupancyTest, OneStateAndAbsorbing) {
  const Mdp one = one_state_mdp({1.0, 0.0}, 0.5);
  EXPECT_NEAR(occupancy(one, Policy::uniform(1, 2), StateDistribution::uniform(1)).weights(0), 1.0, 1e-14);
  const Vector d = occupancy(two_action_fork(), Policy::uniform(3, 2), StateDistribution::point_mass(3, 2)).weights;
  EXPECT_NEAR(d(2), 1.0, 1e-12);
  EXPECT_NEAR(d(0), 0.0, 1e-12);
  EXPECT_NEAR(d(1), 0.0, 1e-12);
}

TEST(OccupancyTest, MatchesNeumannSeries) {
  std::mt19937_64 rng(53);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mdp mdp = garnet(seed, 4, 2, 2);
    const Policy pi = random_policy(rng, 4, 2);
    const std::vector<double> mu{0.1, 0.2, 0.3, 0.4};
    const Vector d =
        occupancy(mdp, pi, StateDistribution(Eigen::Map<const Vector>(mu.data(), 4))).weights;
    EXPECT_LE(max_abs_diff(testing::neumann_occupancy(mdp, pi.probs(), mu, 2000), d), 1e-8);
    EXPECT_NEAR(d.sum(), 1.0, 1e-10);
    EXPECT_TRUE((d.array() >= 0.0).all());
  }
}

TEST(OccupancyTest, ObjectiveIdentity) {
  std::mt19937_64 rng(59);
  const Mdp mdp = garnet(21, 5, 3, 3);
  const Policy pi = random_policy(rng, 5, 3);
  const auto mu = StateDistribution::uniform(5);
  const Vector d = occupancy(mdp, pi, mu).weights;
  const Vector rpi = policy_kernel_and_reward(mdp, pi).reward;
  EXPECT_NEAR(objective_j(mdp, pi, mu), d.dot(rpi) / (1.0 - mdp.gamma()), 1e-8);
}

TEST(WeightedInnerTest, Examples) {
  const auto mu = StateDistribution::uniform(2);
  EXPECT_DOUBLE_EQ(weighted_inner(mu, Table::Ones(2, 3), Table::Zero(2, 3)), 0.0);
  EXPECT_DOUBLE_EQ(weighted_inner(mu, Table::Ones(2, 3), Table::Ones(2, 3)), 3.0);
  std::mt19937_64 rng(61);
  const Table a = testing::random_table(rng, 2, 3);
  const Table b = testing::random_table(rng, 2, 3);
  double loop = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c < 3; ++c) loop += 0.5 * a(s, c) * b(s, c);
  EXPECT_NEAR(weighted_inner(mu, a, b), loop, 1e-14);
}

TEST(TotalVariationTest, MaxOverStatesOfHalfL1) {
  Table p(2, 2), q(2, 2);
  p << 1, 0, 0.5, 0.5;
  q << 0, 1, 0.5, 0.5;
  EXPECT_DOUBLE_EQ(total_variation(p, q), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(p, p), 0.0);
}

}  // namespace
}  // namespace dpopt
