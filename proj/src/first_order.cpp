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
#include <sstream>
#include <stdexcept>

#include "dpopt/csv.hpp"

namespace dpopt {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

Table gradient_at(const GradientOracle& oracle, const Table& x) {
  Table g = oracle.eval(x).gradient;
  require(g.rows() == x.rows() && g.cols() == x.cols(), "oracle gradient has the wrong shape");
  require(g.allFinite(), "oracle gradient is not finite");
  return g;
}

Vector resolve_weights(const Vector& block_weights, Eigen::Index blocks) {
  if (block_weights.size() == 0) return Vector::Ones(blocks);
  require(block_weights.size() == blocks, "one block weight per block is required");
  require((block_weights.array() > 0.0).all(), "block weights must be positive");
  return block_weights;
}

void require_common(const Table& x0, int iters) {
  require(x0.rows() > 0 && x0.cols() > 0, "x0 must be non-empty");
  require(iters >= 1, "iters must be >= 1");
}

}  // namespace

Iterates gradient_ascent(const GradientOracle& oracle, const Table& x0, double eta, int iters) {
  require_common(x0, iters);
  Iterates xs{x0};
  for (int k = 0; k < iters; ++k) {
    const Table& x = xs.back();
    xs.push_back(x + eta * gradient_at(oracle, x));
  }
  return xs;
}

Iterates projected_gradient_ascent(const GradientOracle& oracle, const Table& x0, double eta,
                                   int iters) {
  require_common(x0, iters);
  Iterates xs{x0};
  for (int k = 0; k < iters; ++k) {
    const Table& x = xs.back();
    const Table y = x + eta * gradient_at(oracle, x);
    Table next(y.rows(), y.cols());
    for (Eigen::Index b = 0; b < y.rows(); ++b) {
      next.row(b) = simplex_projection(y.row(b).transpose()).transpose();
    }
    xs.push_back(std::move(next));
  }
  return xs;
}

Table linear_maximizer(const Table& g) { return greedy(QFunction{g}).probs(); }

Iterates frank_wolfe(const GradientOracle& oracle, const Table& x0, double alpha, int iters) {
  require_common(x0, iters);
  require(alpha > 0.0 && alpha <= 1.0, "frank_wolfe: alpha must be in (0, 1]");
  Iterates xs{x0};
  for (int k = 0; k < iters; ++k) {
    const Table& x = xs.back();
    const Table vertex = linear_maximizer(gradient_at(oracle, x));
    xs.push_back(convex_mixture(x, vertex, alpha));
  }
  return xs;
}

Iterates mirror_descent(const GradientOracle& oracle, const Table& x0, double eta,
                        Regularizer omega, int iters, const Vector& block_weights) {
  require_common(x0, iters);
  require(eta > 0.0, "mirror_descent: eta must be positive");
  const Vector w = resolve_weights(block_weights, x0.rows());
  Iterates xs{x0};
  for (int k = 0; k < iters; ++k) {
    const Table& x = xs.back();
    const Table g = gradient_at(oracle, x);
    Table next(x.rows(), x.cols());
    for (Eigen::Index b = 0; b < x.rows(); ++b) {
      next.row(b) =
          md_row(omega, g.row(b).transpose(), x.row(b).transpose(), eta / w(b)).transpose();
    }
    xs.push_back(std::move(next));
  }
  return xs;
}

Iterates dual_averaging(const GradientOracle& oracle, const Table& x0, double eta,
                        Regularizer omega, int iters, const Vector& block_weights) {
  require_common(x0, iters);
  require(eta > 0.0, "dual_averaging: eta must be positive");
  const Vector w = resolve_weights(block_weights, x0.rows());
  Iterates xs{x0};
  Table gradient_sum = Table::Zero(x0.rows(), x0.cols());
  for (int k = 0; k < iters; ++k) {
    gradient_sum += gradient_at(oracle, xs.back());
    Table next(x0.rows(), x0.cols());
    for (Eigen::Index b = 0; b < x0.rows(); ++b) {
      next.row(b) = da_row(omega, gradient_sum.row(b).transpose(), eta / w(b)).transpose();
    }
    xs.push_back(std::move(next));
  }
  return xs;
}

double feasibility_error(const Table& x) {
  double worst = 0.0;
  for (Eigen::Index b = 0; b < x.rows(); ++b) {
    worst = std::max(worst, std::abs(x.row(b).sum() - 1.0));
    worst = std::max(worst, -x.row(b).minCoeff());
  }
  return worst;
}

double frank_wolfe_gap(const Table& x, const Table& g) {
  return ((linear_maximizer(g) - x).array() * g.array()).sum();
}

std::string iterates_csv(const GradientOracle& oracle, const Iterates& iterates) {
  std::ostringstream out;
  out << "iter,objective,feasibility_err,step_norm\n";
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    const auto value = oracle.eval(iterates[k]).value;
    const double step = k == 0 ? 0.0 : (iterates[k] - iterates[k - 1]).norm();
    out << k << ',' << (value ? format_double(*value) : std::string()) << ','
        << format_double(feasibility_error(iterates[k])) << ',' << format_double(step) << '\n';
  }
  return out.str();
}

namespace objectives {

GradientOracle concave_quadratic(Table center) {
  return {[c = std::move(center)](const Table& x) {
            return OracleResult{-0.5 * (x - c).squaredNorm(), c - x};
          },
          GradientKind::Vanilla};
}

GradientOracle linear(Table c) {
  return {[c = std::move(c)](const Table& x) {
            return OracleResult{(x.array() * c.array()).sum(), c};
          },
          GradientKind::Vanilla};
}

GradientOracle entropy_regularized_linear(Table c, double tau) {
  return {[c = std::move(c), tau](const Table& x) {
            require((x.array() > 0.0).all(), "entropy_regularized_linear needs x > 0");
            const double value =
                (x.array() * c.array()).sum() - tau * (x.array() * x.array().log()).sum();
            Table g = c.array() - tau * (x.array().log() + 1.0);
            return OracleResult{value, std::move(g)};
          },
          GradientKind::Vanilla};
}

}  // namespace objectives

}  // namespace dpopt
