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

#include "dpopt/first_order.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace dpopt {
namespace {

Table row(std::initializer_list<double> xs) {
  Table t(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) t(0, i++) = x;
  return t;
}

GradientOracle zero_oracle() {
  return {[](const Table& x) { return OracleResult{0.0, Table::Zero(x.rows(), x.cols())}; },
          GradientKind::Vanilla};
}

GradientOracle constant_oracle(Table g) {
  return {[g = std::move(g)](const Table&) { return OracleResult{std::nullopt, g}; }, GradientKind::Vanilla};
}

double quadratic_value(const Table& x, const Table& c) { return -0.5 * (x - c).squaredNorm(); }

// Maximum of -1/2 |x - c|^2 over the 3-simplex on a grid of step 1/n.
double grid_max_quadratic_3(const Table& c, int n) {
  double best = -1e300;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      Table x(1, 3);
      x << double(i) / n, double(j) / n, double(n - i - j) / n;
      best = std::max(best, quadratic_value(x, c));
    }
  return best;
}

const Table kOutside = row({0.9, 0.6, -0.2});  // optimum (0.65, 0.35, 0) on an edge
const Table kBeyondVertex = row({1.5, 0.2, -0.3});  // optimum at the vertex (1, 0, 0)

// --- gradient ascent --------------------------------------------------------

TEST(GradientAscentTest, ZeroGradientIsStationary) {
  const Table x0 = row({0.3, 0.7});
  for (const Table& x : gradient_ascent(zero_oracle(), x0, 1.0, 5)) EXPECT_EQ(x, x0);
  for (const Table& x : projected_gradient_ascent(zero_oracle(), x0, 1.0, 5)) EXPECT_LE((x - x0).norm(), 1e-15);
}

TEST(GradientAscentTest, UnitStepOnQuadraticLandsOnCenter) {
  const Table c = row({2.0, -1.0, 0.5});
  EXPECT_LE((gradient_ascent(objectives::concave_quadratic(c), row({0, 0, 0}), 1.0, 1)[1] - c).norm(), 1e-15);
}

TEST(GradientAscentTest, LinearRateOnQuadratic) {
  const Table c = row({2.0, -1.0});
  const Iterates xs = gradient_ascent(objectives::concave_quadratic(c), row({0, 0}), 0.1, 50);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    EXPECT_NEAR((xs[k] - c).norm() / (xs[k - 1] - c).norm(), 0.9, 1e-12);
  }
}

TEST(ProjectedGradientTest, LinearObjectiveBigStepHitsVertex) {
  const Iterates xs = projected_gradient_ascent(objectives::linear(row({1, 0})), row({0.5, 0.5}), 10.0, 1);
  EXPECT_NEAR(xs[1](0, 0), 1.0, 1e-15);
  EXPECT_NEAR(xs[1](0, 1), 0.0, 1e-15);
}

TEST(ProjectedGradientTest, MonotoneOnQuadratic) {
  const auto oracle = objectives::concave_quadratic(kOutside);
  const Iterates xs = projected_gradient_ascent(oracle, row({1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.01, 200);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    EXPECT_GE(quadratic_value(xs[k], kOutside), quadratic_value(xs[k - 1], kOutside) - 1e-15);
    EXPECT_LE(feasibility_error(xs[k]), 1e-10);
  }
}

// --- Frank-Wolfe ------------------------------------------------------------

TEST(FrankWolfeTest, ZeroGradientDriftsToFirstVertex) {
  const Iterates xs = frank_wolfe(zero_oracle(), row({0.2, 0.8}), 0.5, 3);
  EXPECT_NEAR(xs[3](0, 0), 1.0 - 0.8 * 0.125, 1e-15);
}

TEST(FrankWolfeTest, FullStepOnLinearIsOptimal) {
  const Iterates xs = frank_wolfe(objectives::linear(row({0.1, 0.7, 0.3})), row({1.0 / 3, 1.0 / 3, 1.0 / 3}), 1.0, 1);
  EXPECT_EQ(xs[1], row({0, 1, 0}));
}

TEST(FrankWolfeTest, GapVanishesOnQuadratic) {
  const auto oracle = objectives::concave_quadratic(kBeyondVertex);
  const Iterates xs = frank_wolfe(oracle, row({1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.5, 200);
  const Table& last = xs.back();
  EXPECT_LE(frank_wolfe_gap(last, oracle.eval(last).gradient), 1e-4);
  EXPECT_GE(quadratic_value(last, kBeyondVertex), grid_max_quadratic_3(kBeyondVertex, 400) - 1e-4);
}

TEST(FrankWolfeTest, MixtureIdentityIsExact) {
  std::mt19937_64 rng(1);
  const Table c = testing::random_table(rng, 3, 4);
  const auto oracle = objectives::concave_quadratic(c);
  const Iterates xs = frank_wolfe(oracle, Policy::uniform(3, 4).probs(), 0.3, 50);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const Table s = linear_maximizer(oracle.eval(xs[k]).gradient);
    EXPECT_EQ(xs[k + 1], ((1.0 - 0.3) * xs[k].array() + 0.3 * s.array()).matrix());
  }
}

// --- mirror descent / dual averaging ----------------------------------------

TEST(MirrorDescentTest, ZeroGradientIsStationary) {
  const Table x0 = row({0.3, 0.7});
  for (Regularizer omega : {Regularizer::NegativeEntropy, Regularizer::HalfSquaredNorm}) {
    for (const Table& x : mirror_descent(zero_oracle(), x0, 1.0, omega, 5)) {
      EXPECT_LE((x - x0).norm(), 1e-15);
    }
  }
}

TEST(MirrorDescentTest, KlLogThreeStep) {
  const Iterates xs =
      mirror_descent(constant_oracle(row({1, 0})), row({0.5, 0.5}), std::log(3.0), Regularizer::NegativeEntropy, 1);
  EXPECT_NEAR(xs[1](0, 0), 0.75, 1e-15);
}

TEST(MirrorDescentTest, EuclidOnInteriorIsGradientAscent) {
  const Table c = row({0.4, 0.35, 0.25});
  const auto oracle = objectives::concave_quadratic(c);
  const Table x0 = row({0.3, 0.3, 0.4});
  const Iterates md = mirror_descent(oracle, x0, 0.2, Regularizer::HalfSquaredNorm, 20);
  const Iterates ga = gradient_ascent(oracle, x0, 0.2, 20);
  for (std::size_t k = 0; k < md.size(); ++k) EXPECT_LE((md[k] - ga[k]).norm(), 1e-12);
}

TEST(MirrorDescentTest, BlockWeightsScaleTheStep) {
  const Table g = (Table(2, 2) << 1, 0, 1, 0).finished();
  const Vector w = (Vector(2) << 1.0, 2.0).finished();
  const Iterates xs = mirror_descent(constant_oracle(g), Policy::uniform(2, 2).probs(), std::log(3.0),
                                     Regularizer::NegativeEntropy, 1, w);
  EXPECT_NEAR(xs[1](0, 0), 0.75, 1e-15);
  EXPECT_NEAR(xs[1](1, 0), std::sqrt(3.0) / (1.0 + std::sqrt(3.0)), 1e-15);
  EXPECT_THROW(mirror_descent(constant_oracle(g), Policy::uniform(2, 2).probs(), 1.0,
                              Regularizer::NegativeEntropy, 1, Vector::Ones(3)),
               std::invalid_argument);
}

TEST(DualAveragingTest, ZeroGradientGivesUniform) {
  const Iterates xs = dual_averaging(zero_oracle(), row({0.2, 0.5, 0.3}), 1.0, Regularizer::NegativeEntropy, 4);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    EXPECT_LE((xs[k] - row({1.0 / 3, 1.0 / 3, 1.0 / 3})).norm(), 1e-15);
  }
}

TEST(DualAveragingTest, ConstantGradientIsSoftmaxOfSum) {
  const Table g = row({0.4, -0.1, 0.2});
  const double eta = 0.3;
  const Iterates xs = dual_averaging(constant_oracle(g), row({1.0 / 3, 1.0 / 3, 1.0 / 3}), eta,
                                     Regularizer::NegativeEntropy, 30);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    double z = 0.0;
    for (int i = 0; i < 3; ++i) z += std::exp(k * eta * g(0, i));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(xs[k](0, i), std::exp(k * eta * g(0, i)) / z, 1e-14);
  }
}

TEST(DualAveragingTest, QuadraticApproachesGridOptimum) {
  const auto oracle = objectives::concave_quadratic(kOutside);
  const Iterates xs = dual_averaging(oracle, row({1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.05,
                                     Regularizer::NegativeEntropy, 2000);
  EXPECT_GE(quadratic_value(xs.back(), kOutside), grid_max_quadratic_3(kOutside, 400) - 1e-3);
}

TEST(MirrorDualConsistencyTest, ConstantGradientTelescopes) {
  std::mt19937_64 rng(2);
  const Table g = testing::random_table(rng, 3, 4);
  const Table x0 = Policy::uniform(3, 4).probs();
  const Iterates md = mirror_descent(constant_oracle(g), x0, 0.2, Regularizer::NegativeEntropy, 100);
  const Iterates da = dual_averaging(constant_oracle(g), x0, 0.2, Regularizer::NegativeEntropy, 100);
  for (std::size_t k = 0; k < md.size(); ++k) EXPECT_LE((md[k] - da[k]).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(FeasibilityTest, AllSimplexMethodsStayFeasible) {
  std::mt19937_64 rng(3);
  const Table c = testing::random_table(rng, 4, 3, 2.0);
  const auto oracle = objectives::concave_quadratic(c);
  const Table x0 = Policy::uniform(4, 3).probs();
  std::vector<Iterates> runs{projected_gradient_ascent(oracle, x0, 0.3, 100), frank_wolfe(oracle, x0, 0.2, 100),
                             mirror_descent(oracle, x0, 0.3, Regularizer::NegativeEntropy, 100),
                             mirror_descent(oracle, x0, 0.3, Regularizer::HalfSquaredNorm, 100),
                             dual_averaging(oracle, x0, 0.3, Regularizer::NegativeEntropy, 100),
                             dual_averaging(oracle, x0, 0.3, Regularizer::HalfSquaredNorm, 100)};
  for (const auto& xs : runs)
    for (const auto& x : xs) EXPECT_LE(feasibility_error(x), 1e-10);
}

// --- oracles ----------------------------------------------------------------

TEST(ObjectiveOracleTest, GradientsMatchCentralDifferences) {
  std::mt19937_64 rng(4);
  const Table c = testing::random_table(rng, 2, 3);
  const Table x = Policy(testing::random_policy(rng, 2, 3)).probs();
  for (const auto& oracle : {objectives::concave_quadratic(c), objectives::linear(c),
                             objectives::entropy_regularized_linear(c, 0.7)}) {
    const Table g = oracle.eval(x).gradient;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) {
        Table up = x, down = x;
        up(i, j) += 1e-6;
        down(i, j) -= 1e-6;
        const double fd = (*oracle.eval(up).value - *oracle.eval(down).value) / 2e-6;
        EXPECT_LE(std::abs(fd - g(i, j)), 1e-5 * std::max(1.0, std::abs(g(i, j))));
      }
  }
}

TEST(IteratesCsvTest, HeaderAndStepNorm) {
  const auto oracle = objectives::linear(row({1, 0}));
  const std::string csv = iterates_csv(oracle, frank_wolfe(oracle, row({0.5, 0.5}), 1.0, 1));
  EXPECT_EQ(csv, "iter,objective,feasibility_err,step_norm\n0,0.5,0,0\n1,1,0,0.70710678118654757\n");
}

}  // namespace
}  // namespace dpopt
