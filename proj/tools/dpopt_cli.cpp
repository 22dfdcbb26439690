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

// Command-line front end: solve, verify, garnet, experiment.
// Exit codes: 0 success, 1 a correspondence check failed, 2 invalid input.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpopt/correspondence.hpp"
#include "dpopt/csv.hpp"
#include "dpopt/experiment.hpp"
#include "dpopt/garnet.hpp"
#include "dpopt/mdp_io.hpp"
#include "dpopt/schemes.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MdpOptions {
  std::string mdp_path;
  std::uint64_t seed = 0;
  dpopt::GarnetSpec garnet;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--mdp", mdp_path, "MDP JSON file (a Garnet is generated when absent)");
    add_garnet_flags(cmd);
  }

  void add_garnet_flags(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Garnet seed");
    cmd->add_option("--states", garnet.num_states, "Garnet number of states");
    cmd->add_option("--actions", garnet.num_actions, "Garnet number of actions");
    cmd->add_option("--branching", garnet.branching_factor, "Garnet branching factor");
    cmd->add_option("--sparsity", garnet.reward_sparsity, "Garnet reward sparsity");
    cmd->add_option("--gamma", garnet.gamma, "Discount factor of the generated Garnet");
  }

  dpopt::GarnetSpec garnet_spec() const {
    dpopt::GarnetSpec spec = garnet;
    spec.seed = seed;
    return spec;
  }

  dpopt::LoadedMdp load() const {
    if (!mdp_path.empty()) return dpopt::load_mdp(mdp_path);
    return {dpopt::generate_garnet(garnet_spec()), std::nullopt};
  }
};

struct StepOptions {
  std::optional<double> alpha;
  std::optional<double> eta;
  std::string m;
  std::string omega = "kl";
  int iters = 0;
  double tol = 1e-8;

  dpopt::Regularizer regularizer() const {
    const auto parsed = dpopt::parse_regularizer(omega);
    if (!parsed) throw InvalidInput("--omega must be kl or euclid");
    return *parsed;
  }
};

void emit(const std::string& out_dir, const std::string& filename, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(out_dir);
  dpopt::write_file_atomic(std::filesystem::path(out_dir) / filename, text);
}

int cmd_solve(const MdpOptions& mdp_opts, const StepOptions& step, const std::string& scheme_name,
              const std::string& out_dir) {
  const auto scheme = dpopt::parse_scheme(scheme_name);
  if (!scheme) throw InvalidInput("unknown scheme " + scheme_name);
  const dpopt::LoadedMdp loaded = mdp_opts.load();

  dpopt::SchemeSpec spec;
  spec.scheme = *scheme;
  spec.step.alpha = step.alpha;
  spec.step.eta = step.eta;
  if (!step.m.empty()) {
    spec.step.m = dpopt::parse_depth(step.m);
    if (!spec.step.m) throw InvalidInput("--m must be a positive integer or inf");
  }
  if (*scheme == dpopt::Scheme::MD_MPI || *scheme == dpopt::Scheme::POLITEX) {
    spec.omega = step.regularizer();
  }
  spec.mu = loaded.mu;
  if (step.iters > 0) spec.max_iters = step.iters;
  spec.stop_tol = step.tol;

  const dpopt::RunTrace trace = dpopt::run_scheme(loaded.mdp, spec);
  emit(out_dir, std::string(dpopt::to_string(*scheme)) + ".csv", dpopt::trace_csv(trace));
  const auto& last = trace.final();
  std::cerr << dpopt::to_string(*scheme) << ": "
            << (trace.reason == dpopt::StopReason::Converged ? "converged" : "hit max_iters")
            << " at iteration " << trace.terminated_at << ", J = " << dpopt::format_double(last.objective)
            << ", residual = " << dpopt::format_double(last.bellman_residual) << '\n';
  return kExitOk;
}

int cmd_verify(const MdpOptions& mdp_opts, const StepOptions& step,
               const std::vector<std::string>& pair_names, const std::string& out_dir) {
  std::vector<dpopt::Pair> pairs;
  for (const auto& name : pair_names) {
    const auto pair = dpopt::parse_pair(name);
    if (!pair) throw InvalidInput("unknown pair " + name);
    pairs.push_back(*pair);
  }
  if (pairs.empty()) pairs = {dpopt::Pair::FwCpi, dpopt::Pair::MdMdMpi, dpopt::Pair::DaPolitex};

  const dpopt::LoadedMdp loaded = mdp_opts.load();
  const dpopt::StateDistribution mu =
      loaded.mu.value_or(dpopt::StateDistribution::uniform(loaded.mdp.num_states()));
  const std::uint64_t seed = mdp_opts.mdp_path.empty() ? mdp_opts.seed : 0;

  std::string csv = dpopt::equivalence_csv_header() + "\n";
  bool all_passed = true;
  for (dpopt::Pair pair : pairs) {
    dpopt::CheckSpec check = dpopt::default_check(pair);
    if (step.alpha) check.alpha = *step.alpha;
    if (step.eta) check.eta = *step.eta;
    check.omega = step.regularizer();
    if (step.iters > 0) check.iters = step.iters;
    dpopt::EquivalenceReport report;
    switch (pair) {
      case dpopt::Pair::FwCpi:
        report = dpopt::verify_cpi_fw(loaded.mdp, mu, check.alpha, check.iters);
        break;
      case dpopt::Pair::MdMdMpi:
        report = dpopt::verify_mdmpi_md(loaded.mdp, mu, check.eta, check.omega, check.iters);
        break;
      case dpopt::Pair::DaPolitex:
        report = dpopt::verify_politex_da(loaded.mdp, mu, check.eta, check.omega, check.iters);
        break;
    }
    all_passed = all_passed && report.passed;
    csv += dpopt::equivalence_csv_row(report, seed) + "\n";
  }
  emit(out_dir, "equivalence.csv", csv);
  return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_garnet(const MdpOptions& mdp_opts, const std::string& out_path) {
  const std::string text = dpopt::mdp_to_json(dpopt::generate_garnet(mdp_opts.garnet_spec()));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    dpopt::write_file_atomic(out_path, text);
  }
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
  dpopt::ExperimentConfig config = dpopt::load_experiment_config(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  const dpopt::ExperimentSummary summary = dpopt::run_experiment(config);
  std::cerr << "runs: " << summary.runs << ", checks passed: " << summary.checks_passed << "/"
            << summary.checks_total << ", output: " << config.output_dir.string() << '\n';
  return summary.all_checks_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized dynamic programming and first-order optimization on tabular MDPs"};
  app.require_subcommand(1);

  MdpOptions mdp_opts;
  StepOptions step;
  std::string scheme_name;
  std::vector<std::string> pair_names;
  std::string out;
  std::string config_path;

  const auto add_step_flags = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", step.alpha, "Mixture rate (CPI, Frank-Wolfe)");
    cmd->add_option("--eta", step.eta, "Learning rate (MD-MPI, Politex, MD, DA)");
    cmd->add_option("--omega", step.omega, "Regularizer: kl or euclid");
    cmd->add_option("--iters", step.iters, "Iteration budget");
  };

  CLI::App* solve = app.add_subcommand("solve", "Run one scheme on one MDP");
  mdp_opts.add_to(solve);
  add_step_flags(solve);
  solve->add_option("--scheme", scheme_name, "PI, VI, MPI, CPI, CPI_MPI, MD_MPI or POLITEX")
      ->required();
  solve->add_option("--m", step.m, "Evaluation depth: positive integer or inf");
  solve->add_option("--tol", step.tol, "Stopping tolerance on the Bellman residual");
  solve->add_option("--out", out, "Output directory (stdout when absent)");

  CLI::App* verify = app.add_subcommand("verify", "Check DP / optimization correspondences");
  mdp_opts.add_to(verify);
  add_step_flags(verify);
  verify->add_option("--pair", pair_names, "FW-CPI, MD-MD_MPI, DA-POLITEX (default: all)");
  verify->add_option("--out", out, "Output directory (stdout when absent)");

  CLI::App* garnet = app.add_subcommand("garnet", "Emit a generated Garnet MDP as JSON");
  mdp_opts.add_garnet_flags(garnet);
  garnet->add_option("--out", out, "Output file (stdout when absent)");

  CLI::App* experiment = app.add_subcommand("experiment", "Run a batch from a config file");
  experiment->add_option("--config", config_path, "Experiment config (JSON)")->required();
  experiment->add_option("--out", out, "Override the config's output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(mdp_opts, step, scheme_name, out);
    if (verify->parsed()) return cmd_verify(mdp_opts, step, pair_names, out);
    if (garnet->parsed()) return cmd_garnet(mdp_opts, out);
    if (experiment->parsed()) return cmd_experiment(config_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
