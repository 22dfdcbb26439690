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

#include "dpopt/schemes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dpopt/csv.hpp"

namespace dpopt {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

enum class Evaluation { Exact, PartialV, PartialQ };
enum class Improvement { Greedy, Mixture, Mirror, Dual };

struct Plan {
  Evaluation evaluation = Evaluation::Exact;
  int m = 0;
  Improvement improvement = Improvement::Greedy;
};

Plan plan_for(const SchemeSpec& spec) {
  const EvalDepth depth = spec.step.m.value_or(EvalDepth::exact());
  const auto partial = [&](Evaluation kind) {
    return depth.is_exact() ? Evaluation::Exact : kind;
  };
  switch (spec.scheme) {
    case Scheme::PI: return {Evaluation::Exact, 0, Improvement::Greedy};
    case Scheme::VI: return {Evaluation::PartialV, 1, Improvement::Greedy};
    case Scheme::MPI: return {partial(Evaluation::PartialV), depth.steps(), Improvement::Greedy};
    case Scheme::CPI: return {Evaluation::Exact, 0, Improvement::Mixture};
    case Scheme::CPI_MPI:
      return {partial(Evaluation::PartialQ), depth.steps(), Improvement::Mixture};
    case Scheme::MD_MPI:
      return {partial(Evaluation::PartialQ), depth.steps(), Improvement::Mirror};
    case Scheme::POLITEX:
      return {partial(Evaluation::PartialQ), depth.steps(), Improvement::Dual};
  }
  return {};
}

double residual(const Mdp& mdp, const ValueFunction& v) {
  return (bellman_optimal(mdp, v).values - v.values).cwiseAbs().maxCoeff();
}

RunTrace run_engine(const Mdp& mdp, SchemeSpec spec, Scheme scheme) {
  spec.scheme = scheme;
  spec.validate(mdp);
  const StateDistribution mu = spec.mu.value_or(StateDistribution::uniform(mdp.num_states()));
  const Plan plan = plan_for(spec);
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();

  // Deterministic greedy improvement on exact values stops once the improvement
  // step returns the current policy; every other scheme stops on the Bellman
  // residual.
  const bool stop_on_stationarity =
      plan.evaluation == Evaluation::Exact &&
      (plan.improvement == Improvement::Greedy ||
       (plan.improvement == Improvement::Mixture && *spec.step.alpha == 1.0));

  Policy pi = spec.initial_policy.value_or(Policy::uniform(ns, na));
  ValueFunction v_prev{spec.initial_value.value_or(Vector::Zero(ns))};
  QFunction q_prev{Table::Zero(ns, na)};
  Table q_sum = Table::Zero(ns, na);

  RunTrace trace;
  trace.scheme = scheme;
  for (int k = 0;; ++k) {
    ValueFunction v;
    QFunction q;
    switch (plan.evaluation) {
      case Evaluation::Exact:
        v = policy_value(mdp, pi);
        q = q_from_v(mdp, v);
        break;
      case Evaluation::PartialV:
        if (scheme == Scheme::VI && k > 0) {
          // pi_k is greedy for v_{k-1}, so T_{pi_k} v_{k-1} = T_* v_{k-1}.
          v = bellman_optimal(mdp, v_prev);
        } else {
          v = v_prev;
          for (int i = 0; i < plan.m; ++i) v = bellman_eval(mdp, pi, v);
        }
        q = q_from_v(mdp, v);
        break;
      case Evaluation::PartialQ:
        q = partial_eval(mdp, pi, q_prev, plan.m);
        v = ValueFunction{expected_under(pi, q.values)};
        break;
    }

    const double objective = plan.evaluation == Evaluation::Exact
                                 ? mu.weights().dot(v.values)
                                 : objective_j(mdp, pi, mu);
    const double delta = k == 0 ? 0.0 : total_variation(pi.probs(), trace.iterates.back().policy.probs());
    trace.iterates.push_back(IterationRecord{k, pi, q, v, objective, residual(mdp, v), delta});

    Policy next = pi;
    switch (plan.improvement) {
      case Improvement::Greedy:
        next = greedy(q);
        break;
      case Improvement::Mixture:
        next = Policy(convex_mixture(pi.probs(), greedy(q).probs(), *spec.step.alpha));
        break;
      case Improvement::Mirror:
        next = md_step(q, pi, *spec.step.eta, *spec.omega, mu);
        break;
      case Improvement::Dual:
        q_sum += q.values;
        next = da_step(q_sum, *spec.step.eta, *spec.omega, mu);
        break;
    }

    const bool converged =
        stop_on_stationarity ? next == pi : trace.iterates.back().bellman_residual <= spec.stop_tol;
    if (converged || k >= spec.max_iters) {
      trace.terminated_at = k;
      trace.reason = converged ? StopReason::Converged : StopReason::MaxIters;
      break;
    }
    v_prev = std::move(v);
    q_prev = std::move(q);
    pi = std::move(next);
  }
  return trace;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::PI: return "PI";
    case Scheme::VI: return "VI";
    case Scheme::MPI: return "MPI";
    case Scheme::CPI: return "CPI";
    case Scheme::CPI_MPI: return "CPI_MPI";
    case Scheme::MD_MPI: return "MD_MPI";
    case Scheme::POLITEX: return "POLITEX";
  }
  return "UNKNOWN";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::PI, Scheme::VI, Scheme::MPI, Scheme::CPI, Scheme::CPI_MPI,
                   Scheme::MD_MPI, Scheme::POLITEX}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

void SchemeSpec::validate(const Mdp& mdp) const {
  const std::string name(to_string(scheme));
  step.validate();
  require(max_iters >= 1, name + ": max_iters must be positive");
  require(stop_tol >= 0.0, name + ": stop_tol must be nonnegative");
  switch (scheme) {
    case Scheme::CPI:
      require(step.alpha.has_value(), name + " requires alpha");
      break;
    case Scheme::CPI_MPI:
      require(step.alpha.has_value(), name + " requires alpha");
      require(step.m.has_value(), name + " requires m");
      break;
    case Scheme::MPI:
      require(step.m.has_value(), name + " requires m");
      break;
    case Scheme::MD_MPI:
    case Scheme::POLITEX:
      require(step.eta.has_value(), name + " requires eta");
      require(omega.has_value(), name + " requires a regularizer");
      break;
    case Scheme::PI:
    case Scheme::VI:
      break;
  }
  if (mu) {
    require(mu->size() == mdp.num_states(), name + ": mu size does not match the MDP");
    const bool needs_positive = scheme == Scheme::CPI || scheme == Scheme::CPI_MPI ||
                                scheme == Scheme::MD_MPI || scheme == Scheme::POLITEX;
    require(!needs_positive || mu->strictly_positive(), name + " requires mu > 0");
  }
  if (initial_policy) {
    require(initial_policy->num_states() == mdp.num_states() &&
                initial_policy->num_actions() == mdp.num_actions(),
            name + ": initial policy shape does not match the MDP");
  }
  if (initial_value) {
    require(initial_value->size() == mdp.num_states() && initial_value->allFinite(),
            name + ": initial value must be finite with one entry per state");
  }
}

RunTrace run_pi(const Mdp& mdp, const SchemeSpec& spec) { return run_engine(mdp, spec, Scheme::PI); }
RunTrace run_vi(const Mdp& mdp, const SchemeSpec& spec) { return run_engine(mdp, spec, Scheme::VI); }
RunTrace run_mpi(const Mdp& mdp, const SchemeSpec& spec) { return run_engine(mdp, spec, Scheme::MPI); }
RunTrace run_cpi(const Mdp& mdp, const SchemeSpec& spec) { return run_engine(mdp, spec, Scheme::CPI); }
RunTrace run_cpi_mpi(const Mdp& mdp, const SchemeSpec& spec) {
  return run_engine(mdp, spec, Scheme::CPI_MPI);
}
RunTrace run_md_mpi(const Mdp& mdp, const SchemeSpec& spec) {
  return run_engine(mdp, spec, Scheme::MD_MPI);
}
RunTrace run_politex(const Mdp& mdp, const SchemeSpec& spec) {
  return run_engine(mdp, spec, Scheme::POLITEX);
}

RunTrace run_scheme(const Mdp& mdp, const SchemeSpec& spec) {
  return run_engine(mdp, spec, spec.scheme);
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream out;
  out << "iter,scheme,J,bellman_residual,policy_delta_tv\n";
  for (const auto& record : trace.iterates) {
    out << record.iter << ',' << to_string(trace.scheme) << ',' << format_double(record.objective)
        << ',' << format_double(record.bellman_residual) << ','
        << format_double(record.policy_delta_tv) << '\n';
  }
  return out.str();
}

}  // namespace dpopt
