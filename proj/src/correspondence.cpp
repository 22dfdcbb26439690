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

#include "dpopt/correspondence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpopt/csv.hpp"
#include "dpopt/schemes.hpp"

namespace dpopt {

namespace {

constexpr double kFiniteDifferenceStep = 1e-6;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

EquivalenceReport compare(Pair pair, const RunTrace& trace, const GradientOracle& oracle,
                          const Iterates& xs) {
  EquivalenceReport report;
  report.pair = pair;
  report.oracle_kind = oracle.kind;
  const std::size_t n = std::min(trace.iterates.size(), xs.size());
  report.iterations_compared = static_cast<int>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& record = trace.iterates[k];
    report.max_policy_tv_gap =
        std::max(report.max_policy_tv_gap, total_variation(record.policy.probs(), xs[k]));
    const auto value = oracle.eval(xs[k]).value;
    const double gap = value ? std::abs(record.objective - *value)
                             : std::numeric_limits<double>::infinity();
    report.max_objective_gap = std::max(report.max_objective_gap, gap);
  }
  report.passed = report.oracle_kind == GradientKind::Natural && n > 0 &&
                  report.max_policy_tv_gap <= report.tolerance;
  return report;
}

SchemeSpec full_length_spec(Scheme scheme, const StateDistribution& mu, int iters) {
  SchemeSpec spec;
  spec.scheme = scheme;
  spec.mu = mu;
  spec.max_iters = iters;
  spec.stop_tol = 0.0;
  return spec;
}

}  // namespace

std::string_view to_string(Pair pair) {
  switch (pair) {
    case Pair::FwCpi: return "FW-CPI";
    case Pair::MdMdMpi: return "MD-MD_MPI";
    case Pair::DaPolitex: return "DA-POLITEX";
  }
  return "UNKNOWN";
}

std::optional<Pair> parse_pair(std::string_view name) {
  const auto normalize = [](std::string_view in) {
    std::string out;
    for (char c : in) out += c == '_' ? '-' : static_cast<char>(std::toupper(c));
    return out;
  };
  const std::string key = normalize(name);
  for (Pair p : {Pair::FwCpi, Pair::MdMdMpi, Pair::DaPolitex}) {
    if (key == normalize(to_string(p))) return p;
  }
  return std::nullopt;
}

GradientOracle natural_oracle(const Mdp& mdp, const StateDistribution& mu) {
  require(mu.size() == mdp.num_states(), "natural_oracle: mu size mismatch");
  require(mu.strictly_positive(), "natural_oracle: mu must be strictly positive");
  return {[mdp, mu](const Table& x) {
            const Policy pi(x);
            const ValueFunction v = policy_value(mdp, pi);
            return OracleResult{mu.weights().dot(v.values), q_from_v(mdp, v).values};
          },
          GradientKind::Natural};
}

EquivalenceReport verify_cpi_fw(const Mdp& mdp, const StateDistribution& mu, double alpha,
                                int iters) {
  SchemeSpec spec = full_length_spec(Scheme::CPI, mu, iters);
  spec.step.alpha = alpha;
  const RunTrace trace = run_cpi(mdp, spec);
  const GradientOracle oracle = natural_oracle(mdp, mu);
  const Iterates xs =
      frank_wolfe(oracle, Policy::uniform(mdp.num_states(), mdp.num_actions()).probs(), alpha,
                  iters);
  return compare(Pair::FwCpi, trace, oracle, xs);
}

EquivalenceReport verify_mdmpi_md(const Mdp& mdp, const StateDistribution& mu, double eta,
                                  Regularizer omega, int iters) {
  SchemeSpec spec = full_length_spec(Scheme::MD_MPI, mu, iters);
  spec.step.eta = eta;
  spec.step.m = EvalDepth::exact();
  spec.omega = omega;
  const RunTrace trace = run_md_mpi(mdp, spec);
  const GradientOracle oracle = natural_oracle(mdp, mu);
  const Iterates xs = mirror_descent(
      oracle, Policy::uniform(mdp.num_states(), mdp.num_actions()).probs(), eta, omega, iters);
  return compare(Pair::MdMdMpi, trace, oracle, xs);
}

EquivalenceReport verify_politex_da(const Mdp& mdp, const StateDistribution& mu, double eta,
                                    Regularizer omega, int iters) {
  SchemeSpec spec = full_length_spec(Scheme::POLITEX, mu, iters);
  spec.step.eta = eta;
  spec.step.m = EvalDepth::exact();
  spec.omega = omega;
  const RunTrace trace = run_politex(mdp, spec);
  const GradientOracle oracle = natural_oracle(mdp, mu);
  const Iterates xs = dual_averaging(
      oracle, Policy::uniform(mdp.num_states(), mdp.num_actions()).probs(), eta, omega, iters);
  return compare(Pair::DaPolitex, trace, oracle, xs);
}

std::string equivalence_csv_header() {
  return "pair,seed,iters,max_policy_tv_gap,max_objective_gap,passed";
}

std::string equivalence_csv_row(const EquivalenceReport& report, std::uint64_t seed) {
  std::ostringstream out;
  out << to_string(report.pair) << ',' << seed << ',' << report.iterations_compared << ','
      << format_double(report.max_policy_tv_gap) << ','
      << format_double(report.max_objective_gap) << ',' << (report.passed ? "true" : "false");
  return out.str();
}

Policy softmax_policy(const Table& logits) {
  require(logits.allFinite(), "softmax_policy: logits must be finite");
  Table probs(logits.rows(), logits.cols());
  for (Eigen::Index s = 0; s < logits.rows(); ++s) {
    const Eigen::RowVectorXd w = (logits.row(s).array() - logits.row(s).maxCoeff()).exp();
    probs.row(s) = w / w.sum();
  }
  return Policy(std::move(probs));
}

NaturalGradientReport check_natural_gradient(const Mdp& mdp, const StateDistribution& mu,
                                             const Table& logits) {
  require(mu.size() == mdp.num_states(), "check_natural_gradient: mu size mismatch");
  require(mu.strictly_positive(), "check_natural_gradient: mu must be strictly positive");
  require(logits.rows() == mdp.num_states() && logits.cols() == mdp.num_actions(),
          "check_natural_gradient: logits shape mismatch");
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();
  const Eigen::Index dim = static_cast<Eigen::Index>(ns) * na;
  const auto flat = [na](int s, int a) { return static_cast<Eigen::Index>(s) * na + a; };

  const Policy pi = softmax_policy(logits);
  const Vector d = occupancy(mdp, pi, mu).weights;
  require((d.array() > 0.0).all(), "check_natural_gradient: occupancy must be strictly positive");

  NaturalGradientReport report;
  report.q = policy_q(mdp, pi).values;

  report.vanilla_gradient = Table(ns, na);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      Table up = logits;
      Table down = logits;
      up(s, a) += kFiniteDifferenceStep;
      down(s, a) -= kFiniteDifferenceStep;
      report.vanilla_gradient(s, a) =
          (objective_j(mdp, softmax_policy(up), mu) - objective_j(mdp, softmax_policy(down), mu)) /
          (2.0 * kFiniteDifferenceStep);
    }
  }

  // grad_theta log pi(a|s) is e_{s,a} - pi(.|s) on block s and zero elsewhere.
  Eigen::MatrixXd fisher = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      Vector score = Vector::Zero(dim);
      for (int b = 0; b < na; ++b) score(flat(s, b)) = (a == b ? 1.0 : 0.0) - pi(s, b);
      fisher += d(s) * pi(s, a) * score * score.transpose();
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher);
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
  Vector inverse = Vector::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (lambda(i) > cutoff) {
      inverse(i) = 1.0 / lambda(i);
      ++report.fisher_rank;
    }
  }
  report.expected_rank = static_cast<Eigen::Index>(ns) * (na - 1);
  report.rank_as_expected = report.fisher_rank == report.expected_rank;

  Vector grad(dim);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) grad(flat(s, a)) = report.vanilla_gradient(s, a);
  }
  const Vector natural =
      eig.eigenvectors() * inverse.asDiagonal() * (eig.eigenvectors().transpose() * grad);
  report.natural_gradient = Table(ns, na);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) report.natural_gradient(s, a) = natural(flat(s, a));
  }

  const double scale = 1.0 / (1.0 - mdp.gamma());
  report.per_state_deviation = Vector(ns);
  double cross = 0.0;
  double q_energy = 0.0;
  for (int s = 0; s < ns; ++s) {
    const Eigen::RowVectorXd diff = report.natural_gradient.row(s) - scale * report.q.row(s);
    const double mean = diff.mean();
    report.per_state_deviation(s) = std::sqrt((diff.array() - mean).square().mean());

    const Eigen::RowVectorXd nc =
        report.natural_gradient.row(s).array() - report.natural_gradient.row(s).mean();
    const Eigen::RowVectorXd qc = report.q.row(s).array() - report.q.row(s).mean();
    cross += nc.dot(qc);
    q_energy += qc.squaredNorm();
  }
  report.max_deviation = report.per_state_deviation.maxCoeff();
  report.measured_scale =
      q_energy > 0.0 ? cross / q_energy : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace dpopt
