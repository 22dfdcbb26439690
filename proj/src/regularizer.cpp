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

#include "dpopt/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpopt {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void require_simplex(const Vector& x, const char* what) {
  Table row = x.transpose();
  if (auto violation = simplex_row_violation(row)) {
    throw std::invalid_argument(std::string(what) + " is not on the simplex: " + *violation);
  }
}

void require_positive_mu(const StateDistribution& mu, Eigen::Index num_states) {
  require(mu.size() == num_states, "mu size does not match the number of states");
  require(mu.strictly_positive(), "regularized greedy steps need mu > 0 in every state");
}

// Normalized exp(logits - max). Entries at -inf get weight 0.
Vector shifted_softmax(const Vector& logits) {
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < logits.size(); ++i) top = std::max(top, logits(i));
  require(std::isfinite(top), "softmax: no finite logit");
  Vector w(logits.size());
  for (Eigen::Index i = 0; i < logits.size(); ++i) w(i) = std::exp(logits(i) - top);
  return w / w.sum();
}

}  // namespace

std::string_view to_string(Regularizer omega) {
  switch (omega) {
    case Regularizer::NegativeEntropy: return "kl";
    case Regularizer::HalfSquaredNorm: return "euclid";
  }
  return "unknown";
}

std::optional<Regularizer> parse_regularizer(std::string_view name) {
  if (name == "kl" || name == "entropy" || name == "negative_entropy") {
    return Regularizer::NegativeEntropy;
  }
  if (name == "euclid" || name == "l2" || name == "half_squared_norm") {
    return Regularizer::HalfSquaredNorm;
  }
  return std::nullopt;
}

EvalDepth EvalDepth::steps(int m) {
  require(m >= 1, "evaluation depth m must be >= 1");
  return EvalDepth(m);
}

void StepConfig::validate() const {
  if (eta) require(std::isfinite(*eta) && *eta > 0.0, "eta must be positive");
  if (alpha) require(*alpha > 0.0 && *alpha <= 1.0, "alpha must be in (0, 1]");
}

double potential(Regularizer omega, const Vector& x) {
  switch (omega) {
    case Regularizer::NegativeEntropy: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) > 0.0) total += x(i) * std::log(x(i));
      }
      return total;
    }
    case Regularizer::HalfSquaredNorm:
      return 0.5 * x.squaredNorm();
  }
  return 0.0;
}

Vector potential_gradient(Regularizer omega, const Vector& x) {
  switch (omega) {
    case Regularizer::NegativeEntropy:
      return x.array().log() + 1.0;
    case Regularizer::HalfSquaredNorm:
      return x;
  }
  return x;
}

double aggregated_potential(Regularizer omega, const Policy& pi, const StateDistribution& mu) {
  require(mu.size() == pi.num_states(), "aggregated_potential: mu size mismatch");
  double total = 0.0;
  for (int s = 0; s < pi.num_states(); ++s) {
    total += mu.weights()(s) * potential(omega, pi.probs().row(s).transpose());
  }
  return total;
}

double bregman(Regularizer omega, const Vector& x, const Vector& x_prev) {
  require(x.size() == x_prev.size(), "bregman: size mismatch");
  require_simplex(x, "x");
  require_simplex(x_prev, "x_prev");
  switch (omega) {
    case Regularizer::NegativeEntropy: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) == 0.0) continue;
        if (x_prev(i) == 0.0) {
          throw std::domain_error("KL divergence is infinite: x[" + std::to_string(i) +
                                  "] > 0 but x_prev[" + std::to_string(i) + "] = 0");
        }
        total += x(i) * std::log(x(i) / x_prev(i));
      }
      return std::max(total, 0.0);
    }
    case Regularizer::HalfSquaredNorm:
      return 0.5 * (x - x_prev).squaredNorm();
  }
  return 0.0;
}

Vector simplex_projection(const Vector& y) {
  require(y.size() > 0 && y.allFinite(), "simplex_projection: input must be finite");
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  return (y.array() - threshold).cwiseMax(0.0);
}

Vector md_row(Regularizer omega, const Vector& g, const Vector& prev, double eta) {
  require(g.size() == prev.size(), "md_row: size mismatch");
  switch (omega) {
    case Regularizer::NegativeEntropy: {
      Vector logits(prev.size());
      for (Eigen::Index a = 0; a < prev.size(); ++a) {
        logits(a) = prev(a) > 0.0 ? std::log(prev(a)) + eta * g(a)
                                  : -std::numeric_limits<double>::infinity();
      }
      return shifted_softmax(logits);
    }
    case Regularizer::HalfSquaredNorm:
      return simplex_projection(prev + eta * g);
  }
  return prev;
}

Vector da_row(Regularizer omega, const Vector& sum, double eta) {
  switch (omega) {
    case Regularizer::NegativeEntropy:
      return shifted_softmax(eta * sum);
    case Regularizer::HalfSquaredNorm:
      return simplex_projection(eta * sum);
  }
  return sum;
}

Policy md_step(const QFunction& q, const Policy& pi_prev, double eta, Regularizer omega,
               const StateDistribution& mu) {
  require(q.values.rows() == pi_prev.num_states() && q.values.cols() == pi_prev.num_actions(),
          "md_step: q and pi_prev shapes differ");
  require(std::isfinite(eta) && eta > 0.0, "md_step: eta must be positive");
  require_positive_mu(mu, q.values.rows());
  Table next(q.values.rows(), q.values.cols());
  for (Eigen::Index s = 0; s < q.values.rows(); ++s) {
    next.row(s) = md_row(omega, q.values.row(s).transpose(),
                         pi_prev.probs().row(s).transpose(), eta)
                      .transpose();
  }
  return Policy(std::move(next));
}

Policy da_step(const Table& q_sum, double eta, Regularizer omega, const StateDistribution& mu) {
  require(std::isfinite(eta) && eta > 0.0, "da_step: eta must be positive");
  require_positive_mu(mu, q_sum.rows());
  Table next(q_sum.rows(), q_sum.cols());
  for (Eigen::Index s = 0; s < q_sum.rows(); ++s) {
    next.row(s) = da_row(omega, q_sum.row(s).transpose(), eta).transpose();
  }
  return Policy(std::move(next));
}

Table convex_mixture(const Table& x, const Table& target, double alpha) {
  require(x.rows() == target.rows() && x.cols() == target.cols(),
          "convex_mixture: shape mismatch");
  Table out(x.rows(), x.cols());
  for (Eigen::Index s = 0; s < x.rows(); ++s) {
    for (Eigen::Index a = 0; a < x.cols(); ++a) {
      out(s, a) = (1.0 - alpha) * x(s, a) + alpha * target(s, a);
    }
  }
  return out;
}

}  // namespace dpopt
