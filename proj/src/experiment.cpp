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

#include "dpopt/experiment.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "dpopt/csv.hpp"
#include "dpopt/mdp_io.hpp"
#include "json.hpp"

namespace dpopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) fail(where + ": unknown field \"" + item.key() + "\"");
  }
}

double get_number(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_number()) fail(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int get_int(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_number_integer()) fail(where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::string get_string(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  if (!v.is_string()) fail(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Regularizer get_omega(const json& object, const std::string& where) {
  const auto omega = parse_regularizer(get_string(object, "omega", where));
  if (!omega) fail(where + ": \"omega\" must be \"kl\" or \"euclid\"");
  return *omega;
}

EvalDepth get_depth(const json& object, const std::string& where) {
  const json& v = object.at("m");
  std::optional<EvalDepth> depth;
  if (v.is_string()) {
    depth = parse_depth(v.get<std::string>());
  } else if (v.is_number_integer() && v.get<long long>() >= 1) {
    depth = EvalDepth::steps(v.get<int>());
  }
  if (!depth) fail(where + ": \"m\" must be a positive integer or \"inf\"");
  return *depth;
}

SchemeSpec parse_scheme_spec(const json& node, std::size_t index) {
  const std::string where = "schemes[" + std::to_string(index) + "]";
  if (!node.is_object()) fail(where + " must be an object");
  reject_unknown_keys(node, {"scheme", "alpha", "eta", "m", "omega", "max_iters", "stop_tol"},
                      where);
  if (!node.contains("scheme")) fail(where + ": missing \"scheme\"");
  const auto scheme = parse_scheme(get_string(node, "scheme", where));
  if (!scheme) fail(where + ": unknown scheme");
  SchemeSpec spec;
  spec.scheme = *scheme;
  if (node.contains("alpha")) spec.step.alpha = get_number(node, "alpha", where);
  if (node.contains("eta")) spec.step.eta = get_number(node, "eta", where);
  if (node.contains("m")) spec.step.m = get_depth(node, where);
  if (node.contains("omega")) spec.omega = get_omega(node, where);
  if (node.contains("max_iters")) spec.max_iters = get_int(node, "max_iters", where);
  if (node.contains("stop_tol")) spec.stop_tol = get_number(node, "stop_tol", where);
  try {
    spec.step.validate();
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
  return spec;
}

CheckSpec parse_check(const json& node, std::size_t index) {
  const std::string where = "checks[" + std::to_string(index) + "]";
  std::string name;
  if (node.is_string()) {
    name = node.get<std::string>();
  } else if (node.is_object()) {
    reject_unknown_keys(node, {"pair", "alpha", "eta", "omega", "iters"}, where);
    if (!node.contains("pair")) fail(where + ": missing \"pair\"");
    name = get_string(node, "pair", where);
  } else {
    fail(where + " must be a pair name or an object");
  }
  const auto pair = parse_pair(name);
  if (!pair) fail(where + ": unknown pair \"" + name + "\"");
  CheckSpec check = default_check(*pair);
  if (node.is_object()) {
    if (node.contains("alpha")) check.alpha = get_number(node, "alpha", where);
    if (node.contains("eta")) check.eta = get_number(node, "eta", where);
    if (node.contains("omega")) check.omega = get_omega(node, where);
    if (node.contains("iters")) check.iters = get_int(node, "iters", where);
  }
  return check;
}

struct Instance {
  std::uint64_t seed;
  Mdp mdp;
  std::optional<StateDistribution> mu;
};

std::vector<Instance> instances(const ExperimentConfig& config) {
  std::vector<Instance> out;
  if (config.mdp_file) {
    LoadedMdp loaded = load_mdp(*config.mdp_file);
    out.push_back({0, std::move(loaded.mdp), std::move(loaded.mu)});
    return out;
  }
  for (std::uint64_t seed : config.seeds) {
    GarnetSpec spec = *config.garnet;
    spec.seed = seed;
    out.push_back({seed, generate_garnet(spec), std::nullopt});
  }
  return out;
}

}  // namespace

std::optional<EvalDepth> parse_depth(std::string_view text) {
  if (text == "inf" || text == "infinity") return EvalDepth::exact();
  int m = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
  if (ec != std::errc() || end != text.data() + text.size() || m < 1) return std::nullopt;
  return EvalDepth::steps(m);
}

CheckSpec default_check(Pair pair) {
  CheckSpec check;
  check.pair = pair;
  switch (pair) {
    case Pair::FwCpi: check.alpha = 0.3; break;
    case Pair::MdMdMpi: check.eta = 0.5; break;
    case Pair::DaPolitex: check.eta = 0.1; break;
  }
  return check;
}

void ExperimentConfig::validate() const {
  if (mdp_file.has_value() == garnet.has_value()) {
    fail("exactly one of \"mdp\" and \"garnet\" must be given");
  }
  if (mdp_file && !std::filesystem::exists(*mdp_file)) {
    fail("MDP file " + mdp_file->string() + " does not exist");
  }
  if (garnet) {
    if (seeds.empty()) fail("garnet: at least one seed is required");
    try {
      garnet->validate();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (schemes.empty() && checks.empty()) fail("at least one scheme or check is required");
  for (const auto& check : checks) {
    if (check.iters < 1) fail("check iters must be positive");
    if (!(check.alpha > 0.0 && check.alpha <= 1.0)) fail("check alpha must be in (0, 1]");
    if (!(check.eta > 0.0)) fail("check eta must be positive");
  }
  if (output_dir.empty()) fail("output_dir is required");
}

ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config top level must be an object");
  reject_unknown_keys(doc, {"mdp", "garnet", "schemes", "checks", "output_dir"}, "config");

  ExperimentConfig config;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  if (doc.contains("mdp")) config.mdp_file = resolve(get_string(doc, "mdp", "config"));
  if (doc.contains("garnet")) {
    const json& g = doc["garnet"];
    if (!g.is_object()) fail("garnet must be an object");
    reject_unknown_keys(g,
                        {"num_states", "num_actions", "branching_factor", "reward_sparsity",
                         "gamma", "seed", "seeds"},
                        "garnet");
    GarnetSpec spec;
    if (g.contains("num_states")) spec.num_states = get_int(g, "num_states", "garnet");
    if (g.contains("num_actions")) spec.num_actions = get_int(g, "num_actions", "garnet");
    if (g.contains("branching_factor"))
      spec.branching_factor = get_int(g, "branching_factor", "garnet");
    if (g.contains("reward_sparsity"))
      spec.reward_sparsity = get_number(g, "reward_sparsity", "garnet");
    if (g.contains("gamma")) spec.gamma = get_number(g, "gamma", "garnet");
    if (g.contains("seed")) {
      if (!g["seed"].is_number_unsigned()) fail("garnet: \"seed\" must be a nonnegative integer");
      config.seeds.push_back(g["seed"].get<std::uint64_t>());
    }
    if (g.contains("seeds")) {
      if (!g["seeds"].is_array()) fail("garnet: \"seeds\" must be an array");
      for (const auto& s : g["seeds"]) {
        if (!s.is_number_unsigned()) fail("garnet: seeds must be nonnegative integers");
        config.seeds.push_back(s.get<std::uint64_t>());
      }
    }
    config.garnet = spec;
  }
  if (doc.contains("schemes")) {
    if (!doc["schemes"].is_array()) fail("schemes must be an array");
    for (std::size_t i = 0; i < doc["schemes"].size(); ++i) {
      config.schemes.push_back(parse_scheme_spec(doc["schemes"][i], i));
    }
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) fail("checks must be an array");
    for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
      config.checks.push_back(parse_check(doc["checks"][i], i));
    }
  }
  if (doc.contains("output_dir")) config.output_dir = resolve(get_string(doc, "output_dir", "config"));
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    fail(e.what());
  }
  try {
    return parse_experiment_config(text, path.parent_path());
  } catch (const ConfigError& e) {
    fail(path.string() + ": " + e.what());
  }
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path traces_dir = config.output_dir / "traces";
  fs::create_directories(traces_dir);

  ExperimentSummary summary;
  std::ostringstream summary_csv;
  summary_csv << "kind,name,seed,iterations,final_J,final_residual,max_policy_tv_gap,"
                 "max_objective_gap,status\n";
  std::ostringstream equivalence_csv;
  equivalence_csv << equivalence_csv_header() << '\n';

  for (const Instance& instance : instances(config)) {
    const StateDistribution mu =
        instance.mu.value_or(StateDistribution::uniform(instance.mdp.num_states()));
    for (std::size_t i = 0; i < config.schemes.size(); ++i) {
      SchemeSpec spec = config.schemes[i];
      spec.mu = mu;
      const RunTrace trace = run_scheme(instance.mdp, spec);
      std::ostringstream name;
      name << "run" << i << '_' << to_string(spec.scheme) << "_seed" << instance.seed << ".csv";
      const fs::path path = traces_dir / name.str();
      write_file_atomic(path, trace_csv(trace));
      summary.files.push_back(path);
      ++summary.runs;
      const auto& last = trace.final();
      summary_csv << "scheme," << to_string(spec.scheme) << ',' << instance.seed << ','
                  << trace.terminated_at << ',' << format_double(last.objective) << ','
                  << format_double(last.bellman_residual) << ",,,"
                  << (trace.reason == StopReason::Converged ? "converged" : "max_iters") << '\n';
    }
    for (const CheckSpec& check : config.checks) {
      EquivalenceReport report;
      switch (check.pair) {
        case Pair::FwCpi:
          report = verify_cpi_fw(instance.mdp, mu, check.alpha, check.iters);
          break;
        case Pair::MdMdMpi:
          report = verify_mdmpi_md(instance.mdp, mu, check.eta, check.omega, check.iters);
          break;
        case Pair::DaPolitex:
          report = verify_politex_da(instance.mdp, mu, check.eta, check.omega, check.iters);
          break;
      }
      ++summary.checks_total;
      if (report.passed) ++summary.checks_passed;
      equivalence_csv << equivalence_csv_row(report, instance.seed) << '\n';
      summary_csv << "check," << to_string(report.pair) << ',' << instance.seed << ','
                  << report.iterations_compared << ",,," << format_double(report.max_policy_tv_gap)
                  << ',' << format_double(report.max_objective_gap) << ','
                  << (report.passed ? "passed" : "failed") << '\n';
    }
  }

  if (!config.checks.empty()) {
    const fs::path path = config.output_dir / "equivalence.csv";
    write_file_atomic(path, equivalence_csv.str());
    summary.files.push_back(path);
  }
  const fs::path path = config.output_dir / "summary.csv";
  write_file_atomic(path, summary_csv.str());
  summary.files.push_back(path);
  return summary;
}

}  // namespace dpopt
