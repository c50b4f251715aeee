// Copyright 2026 The nashmg Authors
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

#include "nashmg/serialization.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nashmg/errors.hpp"

namespace nashmg {
namespace {

using json = nlohmann::ordered_json;

json features_to_json_sim(const LinearMixtureGame& g) {
  // External order is [s'][s][a][b][i].
  json sp_axis = json::array();
  for (int sp = 0; sp < g.num_states; ++sp) {
    json s_axis = json::array();
    for (int s = 0; s < g.num_states; ++s) {
      json a_axis = json::array();
      for (int a = 0; a < g.num_actions_max; ++a) {
        json b_axis = json::array();
        for (int b = 0; b < g.num_actions_min; ++b) {
          json vec = json::array();
          const auto f = g.feature(s, a, b, sp);
          for (int i = 0; i < g.dim; ++i) vec.push_back(f[i]);
          b_axis.push_back(std::move(vec));
        }
        a_axis.push_back(std::move(b_axis));
      }
      s_axis.push_back(std::move(a_axis));
    }
    sp_axis.push_back(std::move(s_axis));
  }
  return sp_axis;
}

json features_to_json_tb(const TurnBasedGame& g) {
  json sp_axis = json::array();
  for (int sp = 0; sp < g.num_states; ++sp) {
    json s_axis = json::array();
    for (int s = 0; s < g.num_states; ++s) {
      json a_axis = json::array();
      for (int a = 0; a < g.num_actions; ++a) {
        json vec = json::array();
        const auto f = g.feature(s, a, sp);
        for (int i = 0; i < g.dim; ++i) vec.push_back(f[i]);
        a_axis.push_back(std::move(vec));
      }
      s_axis.push_back(std::move(a_axis));
    }
    sp_axis.push_back(std::move(s_axis));
  }
  return sp_axis;
}

json theta_to_json(const std::vector<Eigen::VectorXd>& theta) {
  json out = json::array();
  for (const auto& t : theta) {
    json vec = json::array();
    for (Eigen::Index i = 0; i < t.size(); ++i) vec.push_back(t[i]);
    out.push_back(std::move(vec));
  }
  return out;
}

const json& expect(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw ConfigError(std::string("instance document missing key '") + key + "'");
  }
  return *it;
}

int expect_positive_int(const json& doc, const char* key) {
  const json& v = expect(doc, key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(std::string("instance key '") + key + "' must be a positive integer");
  }
  return v.get<int>();
}

double expect_number(const json& j, const char* context) {
  if (!j.is_number()) {
    throw ConfigError(std::string("expected a number in ") + context);
  }
  return j.get<double>();
}

}  // namespace

std::string instance_to_json(const LinearMixtureGame& g) {
  json doc;
  doc["kind"] = "simultaneous";
  doc["dim"] = g.dim;
  doc["num_states"] = g.num_states;
  doc["actions"] = json{{"max", g.num_actions_max}, {"min", g.num_actions_min}};
  doc["horizon"] = g.horizon;
  doc["features"] = features_to_json_sim(g);
  doc["theta_star"] = theta_to_json(g.theta);
  json rewards = json::array();
  for (int h = 0; h < g.horizon; ++h) {
    json s_axis = json::array();
    for (int s = 0; s < g.num_states; ++s) {
      json a_axis = json::array();
      for (int a = 0; a < g.num_actions_max; ++a) {
        json b_axis = json::array();
        for (int b = 0; b < g.num_actions_min; ++b) b_axis.push_back(g.reward(h, s, a, b));
        a_axis.push_back(std::move(b_axis));
      }
      s_axis.push_back(std::move(a_axis));
    }
    rewards.push_back(std::move(s_axis));
  }
  doc["reward"] = std::move(rewards);
  doc["param_bound"] = g.param_bound;
  return doc.dump(2) + "\n";
}

std::string instance_to_json(const TurnBasedGame& g) {
  json doc;
  doc["kind"] = "turn_based";
  doc["dim"] = g.dim;
  doc["num_states"] = g.num_states;
  doc["num_actions"] = g.num_actions;
  doc["horizon"] = g.horizon;
  json owners = json::array();
  for (Owner o : g.owner) owners.push_back(o == Owner::Max ? "max" : "min");
  doc["state_owner"] = std::move(owners);
  doc["features"] = features_to_json_tb(g);
  doc["theta_star"] = theta_to_json(g.theta);
  json rewards = json::array();
  for (int h = 0; h < g.horizon; ++h) {
    json s_axis = json::array();
    for (int s = 0; s < g.num_states; ++s) {
      json a_axis = json::array();
      for (int a = 0; a < g.num_actions; ++a) a_axis.push_back(g.reward(h, s, a));
      s_axis.push_back(std::move(a_axis));
    }
    rewards.push_back(std::move(s_axis));
  }
  doc["reward"] = std::move(rewards);
  doc["param_bound"] = g.param_bound;
  return doc.dump(2) + "\n";
}

std::string instance_to_json(const Instance& instance) {
  return std::visit([](const auto& g) { return instance_to_json(g); }, instance);
}

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("instance JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("instance document must be a JSON object");
  const std::string kind = expect(doc, "kind").get<std::string>();

  const int dim = expect_positive_int(doc, "dim");
  const int S = expect_positive_int(doc, "num_states");
  const int H = expect_positive_int(doc, "horizon");
  const json& features = expect(doc, "features");
  const json& theta = expect(doc, "theta_star");
  const json& reward = expect(doc, "reward");
  const double bound = expect_number(expect(doc, "param_bound"), "param_bound");

  auto read_theta = [&](std::vector<Eigen::VectorXd>* out) {
    if (!theta.is_array() || static_cast<int>(theta.size()) != H) {
      throw ConfigError("theta_star must be an array with one vector per step");
    }
    out->resize(H);
    for (int h = 0; h < H; ++h) {
      const json& row = theta[h];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw ConfigError("theta_star rows must have length dim");
      }
      Eigen::VectorXd t(dim);
      for (int i = 0; i < dim; ++i) t[i] = expect_number(row[i], "theta_star");
      (*out)[h] = std::move(t);
    }
  };

  if (kind == "simultaneous") {
    const json& actions = expect(doc, "actions");
    const int A = expect_positive_int(actions, "max");
    const int B = expect_positive_int(actions, "min");
    LinearMixtureGame g;
    g.num_states = S;
    g.num_actions_max = A;
    g.num_actions_min = B;
    g.horizon = H;
    g.dim = dim;
    read_theta(&g.theta);
    g.features.assign(static_cast<std::size_t>(S) * A * B * S * dim, 0.0);
    if (static_cast<int>(features.size()) != S) {
      throw ConfigError("features outer axis must enumerate next states");
    }
    for (int sp = 0; sp < S; ++sp) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          for (int b = 0; b < B; ++b) {
            const json& vec = features.at(sp).at(s).at(a).at(b);
            if (static_cast<int>(vec.size()) != dim) {
              throw ConfigError("feature vectors must have length dim");
            }
            double* dst = g.features.data() + g.feature_offset(s, a, b, sp);
            for (int i = 0; i < dim; ++i) dst[i] = expect_number(vec[i], "features");
          }
        }
      }
    }
    g.rewards.assign(static_cast<std::size_t>(H) * S * A * B, 0.0);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          for (int b = 0; b < B; ++b) {
            g.rewards[((static_cast<std::size_t>(h) * S + s) * A + a) * B + b] =
                expect_number(reward.at(h).at(s).at(a).at(b), "reward");
          }
        }
      }
    }
    g.param_bound = bound;
    validate(g);
    return g;
  }
  if (kind == "turn_based") {
    const int A = expect_positive_int(doc, "num_actions");
    TurnBasedGame g;
    g.num_states = S;
    g.num_actions = A;
    g.horizon = H;
    g.dim = dim;
    read_theta(&g.theta);
    const json& owners = expect(doc, "state_owner");
    if (!owners.is_array() || static_cast<int>(owners.size()) != S) {
      throw ConfigError("state_owner must tag every state");
    }
    g.owner.resize(S);
    for (int s = 0; s < S; ++s) {
      const std::string tag = owners[s].get<std::string>();
      if (tag == "max") {
        g.owner[s] = Owner::Max;
      } else if (tag == "min") {
        g.owner[s] = Owner::Min;
      } else {
        throw ConfigError("state_owner entries must be 'max' or 'min'");
      }
    }
    g.features.assign(static_cast<std::size_t>(S) * A * S * dim, 0.0);
    for (int sp = 0; sp < S; ++sp) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const json& vec = features.at(sp).at(s).at(a);
          if (static_cast<int>(vec.size()) != dim) {
            throw ConfigError("feature vectors must have length dim");
          }
          double* dst = g.features.data() + g.feature_offset(s, a, sp);
          for (int i = 0; i < dim; ++i) dst[i] = expect_number(vec[i], "features");
        }
      }
    }
    g.rewards.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          g.rewards[(static_cast<std::size_t>(h) * S + s) * A + a] =
              expect_number(reward.at(h).at(s).at(a), "reward");
        }
      }
    }
    g.param_bound = bound;
    validate(g);
    return g;
  }
  throw ConfigError("unknown instance kind '" + kind + "'");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write instance file: " + path);
  out << instance_to_json(instance);
  if (!out) throw ConfigError("write failed for instance file: " + path);
}

}  // namespace nashmg
