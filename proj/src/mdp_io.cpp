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

#include "dpopt/mdp_io.hpp"

#include <cmath>
#include <sstream>

#include "dpopt/csv.hpp"
#include "json.hpp"

namespace dpopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw MdpFormatError(message); }

int positive_int_field(const json& doc, const char* name) {
  if (!doc.contains(name)) fail(std::string("missing field \"") + name + "\"");
  const json& field = doc.at(name);
  if (!field.is_number_integer() || field.get<long long>() < 1) {
    fail(std::string("\"") + name + "\" must be a positive integer");
  }
  return field.get<int>();
}

double number_at(const json& node, const std::string& where) {
  if (!node.is_number()) fail(where + " is not a number");
  return node.get<double>();
}

const json& array_of_size(const json& node, std::size_t size, const std::string& where) {
  if (!node.is_array()) fail(where + " is not an array");
  if (node.size() != size) {
    fail(where + " has " + std::to_string(node.size()) + " entries, expected " +
         std::to_string(size));
  }
  return node;
}

}  // namespace

LoadedMdp parse_mdp(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  const int ns = positive_int_field(doc, "num_states");
  const int na = positive_int_field(doc, "num_actions");
  if (!doc.contains("gamma")) fail("missing field \"gamma\"");
  const double gamma = number_at(doc["gamma"], "gamma");
  if (!doc.contains("rewards")) fail("missing field \"rewards\"");
  if (!doc.contains("transitions")) fail("missing field \"transitions\"");

  Table rewards(ns, na);
  const json& r = array_of_size(doc["rewards"], static_cast<std::size_t>(ns), "rewards");
  for (int s = 0; s < ns; ++s) {
    const std::string row = "rewards[" + std::to_string(s) + "]";
    const json& rs = array_of_size(r[static_cast<std::size_t>(s)], static_cast<std::size_t>(na), row);
    for (int a = 0; a < na; ++a) {
      rewards(s, a) = number_at(rs[static_cast<std::size_t>(a)], row + "[" + std::to_string(a) + "]");
    }
  }

  Eigen::MatrixXd transitions(static_cast<Eigen::Index>(ns) * na, ns);
  const json& p = array_of_size(doc["transitions"], static_cast<std::size_t>(ns), "transitions");
  for (int s = 0; s < ns; ++s) {
    const std::string ps_name = "transitions[" + std::to_string(s) + "]";
    const json& ps = array_of_size(p[static_cast<std::size_t>(s)], static_cast<std::size_t>(na), ps_name);
    for (int a = 0; a < na; ++a) {
      const std::string psa_name = ps_name + "[" + std::to_string(a) + "]";
      const json& psa =
          array_of_size(ps[static_cast<std::size_t>(a)], static_cast<std::size_t>(ns), psa_name);
      for (int next = 0; next < ns; ++next) {
        transitions(static_cast<Eigen::Index>(s) * na + a, next) =
            number_at(psa[static_cast<std::size_t>(next)], psa_name + "[" + std::to_string(next) + "]");
      }
    }
  }

  if (auto violation = Mdp::find_violation(rewards, transitions, gamma)) fail(*violation);
  Mdp mdp(std::move(rewards), std::move(transitions), gamma);

  std::optional<StateDistribution> mu;
  if (doc.contains("mu")) {
    const json& m = array_of_size(doc["mu"], static_cast<std::size_t>(ns), "mu");
    Vector weights(ns);
    for (int s = 0; s < ns; ++s) {
      weights(s) = number_at(m[static_cast<std::size_t>(s)], "mu[" + std::to_string(s) + "]");
    }
    try {
      mu.emplace(std::move(weights));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return {std::move(mdp), std::move(mu)};
}

LoadedMdp load_mdp(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw MdpFormatError(e.what());
  }
  try {
    return parse_mdp(text);
  } catch (const MdpFormatError& e) {
    throw MdpFormatError(path.string() + ": " + e.what());
  }
}

std::string mdp_to_json(const Mdp& mdp, const std::optional<StateDistribution>& mu) {
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();
  json doc;
  doc["num_states"] = ns;
  doc["num_actions"] = na;
  doc["gamma"] = mdp.gamma();
  json rewards = json::array();
  json transitions = json::array();
  for (int s = 0; s < ns; ++s) {
    json rs = json::array();
    json ps = json::array();
    for (int a = 0; a < na; ++a) {
      rs.push_back(mdp.reward(s, a));
      json psa = json::array();
      for (int next = 0; next < ns; ++next) psa.push_back(mdp.transition(s, a, next));
      ps.push_back(std::move(psa));
    }
    rewards.push_back(std::move(rs));
    transitions.push_back(std::move(ps));
  }
  doc["rewards"] = std::move(rewards);
  doc["transitions"] = std::move(transitions);
  if (mu) {
    json weights = json::array();
    for (int s = 0; s < ns; ++s) weights.push_back(mu->weights()(s));
    doc["mu"] = std::move(weights);
  }
  return doc.dump(2) + "\n";
}

}  // namespace dpopt
