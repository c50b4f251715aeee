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

#include "nashmg/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <mutex>
#include <thread>

#include "nashmg/errors.hpp"

namespace nashmg {

const char kVersion[] = "nashmg 0.1.0";

namespace {

using json = nlohmann::ordered_json;

constexpr int kMaxStates = 64;
constexpr int kMaxActions = 8;
constexpr int kMaxHorizon = 10;
constexpr int kMaxDim = 128;

// 17 significant digits round-trips every finite double.
std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key at " + path + "." + item.key());
    }
  }
}

long get_long(const json& doc, const char* key, const std::string& path) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("expected integer at " + path + "." + key);
  }
  return v.get<long>();
}

double get_double(const json& doc, const char* key, const std::string& path) {
  const auto& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError("expected number at " + path + "." + key);
  }
  return v.get<double>();
}

InstanceSpec parse_instance_spec(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$.instance must be an object");
  reject_unknown_keys(doc, {"kind", "path", "S", "A", "B", "H", "d", "seed"},
                      "$.instance");
  InstanceSpec spec;
  if (!doc.contains("kind")) throw ConfigError("$.instance.kind is required");
  spec.kind = doc.at("kind").get<std::string>();

  const auto need = [&](const char* key) {
    if (!doc.contains(key)) {
      throw ConfigError(std::string("$.instance.") + key + " is required for kind '" +
                        spec.kind + "'");
    }
    const long v = get_long(doc, key, "$.instance");
    if (v <= 0) throw ConfigError(std::string("$.instance.") + key + " must be positive");
    return static_cast<int>(v);
  };
  if (doc.contains("seed")) spec.seed = static_cast<std::uint64_t>(get_long(doc, "seed", "$.instance"));

  if (spec.kind == "tabular-random") {
    spec.num_states = need("S");
    spec.actions_max = need("A");
    spec.actions_min = need("B");
    spec.horizon = need("H");
  } else if (spec.kind == "linear-random") {
    spec.dim = need("d");
    spec.num_states = need("S");
    spec.actions_max = need("A");
    spec.actions_min = need("B");
    spec.horizon = need("H");
  } else if (spec.kind == "dummy-mdp") {
    spec.dim = need("d");
    spec.num_states = need("S");
    spec.actions_max = need("A");
    spec.horizon = need("H");
    spec.actions_min = 2;
  } else if (spec.kind == "turn-based-random") {
    spec.dim = need("d");
    spec.num_states = need("S");
    spec.actions_max = need("A");
    spec.actions_min = spec.actions_max;
    spec.horizon = need("H");
  } else if (spec.kind == "file") {
    if (!doc.contains("path")) throw ConfigError("$.instance.path is required for kind 'file'");
    spec.path = doc.at("path").get<std::string>();
  } else {
    throw ConfigError("$.instance.kind '" + spec.kind + "' is not recognized");
  }

  if (spec.kind != "file") {
    if (spec.num_states > kMaxStates || spec.actions_max > kMaxActions ||
        spec.actions_min > kMaxActions || spec.horizon > kMaxHorizon ||
        spec.dim > kMaxDim) {
      throw ConfigError("$.instance dimensions exceed desk-scale caps");
    }
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& overrides_json) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  if (!overrides_json.empty()) {
    json over;
    try {
      over = json::parse(overrides_json);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("override JSON parse error: ") + e.what());
    }
    for (const auto& item : over.items()) doc[item.key()] = item.value();
  }

  reject_unknown_keys(doc,
                      {"instance", "algo", "K", "delta", "lambda", "epsilon",
                       "master_seed", "num_seeds", "monitor", "eval_every", "out_dir",
                       "variance_floor", "beta_constants", "initial_state", "workers"},
                      "$");
  if (!doc.contains("instance")) throw ConfigError("$.instance is required");
  if (!doc.contains("K")) throw ConfigError("$.K is required");

  ExperimentConfig cfg;
  cfg.instance = parse_instance_spec(doc.at("instance"));
  cfg.episodes = get_long(doc, "K", "$");
  if (cfg.episodes < 1) throw ConfigError("$.K must be >= 1");

  if (doc.contains("algo")) {
    cfg.algo = doc.at("algo").get<std::string>();
    if (cfg.algo != "simultaneous" && cfg.algo != "turn-based") {
      throw ConfigError("$.algo must be 'simultaneous' or 'turn-based'");
    }
  }
  if (doc.contains("delta")) {
    cfg.delta = get_double(doc, "delta", "$");
    if (cfg.delta <= 0.0 || cfg.delta >= 1.0) throw ConfigError("$.delta must be in (0,1)");
  }
  if (doc.contains("lambda")) {
    const double v = get_double(doc, "lambda", "$");
    if (v <= 0.0) throw ConfigError("$.lambda must be positive");
    cfg.lambda = v;
  }
  if (doc.contains("epsilon")) {
    const double v = get_double(doc, "epsilon", "$");
    if (v < 0.0) throw ConfigError("$.epsilon must be nonnegative");
    cfg.epsilon = v;
  }
  if (doc.contains("master_seed")) {
    cfg.master_seed = static_cast<std::uint64_t>(get_long(doc, "master_seed", "$"));
  }
  if (doc.contains("num_seeds")) {
    const long v = get_long(doc, "num_seeds", "$");
    if (v < 1 || v > 4096) throw ConfigError("$.num_seeds must be in [1, 4096]");
    cfg.num_seeds = static_cast<int>(v);
  }
  if (doc.contains("monitor")) {
    if (!doc.at("monitor").is_boolean()) throw ConfigError("$.monitor must be boolean");
    cfg.monitor = doc.at("monitor").get<bool>();
  }
  if (doc.contains("eval_every")) {
    const long v = get_long(doc, "eval_every", "$");
    if (v < 0) throw ConfigError("$.eval_every must be >= 0");
    cfg.eval_every = v;
  }
  if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
  if (doc.contains("variance_floor")) {
    cfg.variance_floor = doc.at("variance_floor").get<std::string>();
    if (cfg.variance_floor != "main" && cfg.variance_floor != "quartered") {
      throw ConfigError("$.variance_floor must be 'main' or 'quartered'");
    }
  }
  if (doc.contains("beta_constants")) {
    cfg.beta_constants = doc.at("beta_constants").get<std::string>();
    if (cfg.beta_constants != "lemma" && cfg.beta_constants != "proof") {
      throw ConfigError("$.beta_constants must be 'lemma' or 'proof'");
    }
  }
  if (doc.contains("initial_state")) {
    cfg.initial_state = static_cast<int>(get_long(doc, "initial_state", "$"));
    if (cfg.initial_state < 0) throw ConfigError("$.initial_state must be >= 0");
  }
  if (doc.contains("workers")) {
    const long v = get_long(doc, "workers", "$");
    if (v < 0 || v > 256) throw ConfigError("$.workers must be in [0, 256]");
    cfg.workers = static_cast<int>(v);
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& c) {
  json inst;
  inst["kind"] = c.instance.kind;
  if (c.instance.kind == "file") {
    inst["path"] = c.instance.path;
  } else {
    if (c.instance.dim > 0) inst["d"] = c.instance.dim;
    inst["S"] = c.instance.num_states;
    inst["A"] = c.instance.actions_max;
    if (c.instance.kind == "tabular-random" || c.instance.kind == "linear-random") {
      inst["B"] = c.instance.actions_min;
    }
    inst["H"] = c.instance.horizon;
    inst["seed"] = c.instance.seed;
  }
  json doc;
  doc["instance"] = std::move(inst);
  doc["algo"] = c.algo;
  doc["K"] = c.episodes;
  doc["delta"] = c.delta;
  if (c.lambda) doc["lambda"] = *c.lambda;
  if (c.epsilon) doc["epsilon"] = *c.epsilon;
  doc["master_seed"] = c.master_seed;
  doc["num_seeds"] = c.num_seeds;
  doc["monitor"] = c.monitor;
  doc["eval_every"] = c.eval_every;
  doc["out_dir"] = c.out_dir;
  doc["variance_floor"] = c.variance_floor;
  doc["beta_constants"] = c.beta_constants;
  doc["initial_state"] = c.initial_state;
  doc["workers"] = c.workers;
  return doc.dump(2);
}

Instance build_instance(const InstanceSpec& spec) {
  Rng rng(spec.seed);
  if (spec.kind == "tabular-random") {
    return random_tabular(spec.num_states, spec.actions_max, spec.actions_min,
                          spec.horizon, rng);
  }
  if (spec.kind == "linear-random") {
    return random_instance(spec.dim, spec.num_states, spec.actions_max, spec.actions_min,
                           spec.horizon, rng);
  }
  if (spec.kind == "dummy-mdp") {
    const LinearMixtureMdp mdp =
        random_mdp(spec.dim, spec.num_states, spec.actions_max, spec.horizon, rng);
    LinearMixtureGame g = make_dummy_min_player(mdp, 2);
    validate(g);
    return g;
  }
  if (spec.kind == "turn-based-random") {
    return random_turn_based(spec.dim, spec.num_states, spec.actions_max, spec.horizon,
                             rng);
  }
  if (spec.kind == "file") {
    return load_instance(spec.path);
  }
  throw ConfigError("unknown instance kind '" + spec.kind + "'");
}

namespace {

struct PreparedExperiment {
  // Game the learner interacts with (embedded view for turn-based + algo
  // simultaneous) and the game evaluation oracles run on.
  LinearMixtureGame game;
  const TurnBasedGame* turn_based = nullptr;  // set when algo == turn-based
  LearnerConfig learner;
  long cadence = 1;
};

RunSummary run_one(const PreparedExperiment& prep, const ExperimentConfig& cfg,
                   int run_index, const TurnBasedGame* tb) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary out;
  out.run_index = run_index;
  out.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run_index));
  Rng rng(out.seed);
  RegressionState reg(prep.game.dim, prep.game.horizon, prep.learner.lambda);
  RunMonitor monitor(&prep.game, &prep.learner, cfg.monitor);

  const int S = prep.game.num_states;
  const int A = prep.game.num_actions_max;
  const int B = prep.game.num_actions_min;
  const int H = prep.game.horizon;
  double cum = 0.0;
  for (long k = 1; k <= cfg.episodes; ++k) {
    EpisodeRecord rec = tb != nullptr
                            ? run_turn_based_episode(*tb, reg, prep.learner, k, rng)
                            : run_episode(prep.game, reg, prep.learner, k, rng);
    monitor.observe(rec);
    const bool member_k = monitor.last_membership();
    out.membership_all = monitor.membership_all();

    const bool evaluate = (k % prep.cadence == 0) || k == cfg.episodes;
    if (!evaluate) continue;

    PolicyTable pi{H, S, A, rec.tables.pi};
    PolicyTable nu{H, S, B, rec.tables.nu};
    const double gap = episode_gap(prep.game, pi, nu, rec.initial_state);
    cum += gap;
    out.episodes.push_back(k);
    out.gap.push_back(gap);
    out.cum_regret.push_back(cum);
    out.v_up_s1.push_back(rec.v_up_s1);
    out.v_lo_s1.push_back(rec.v_lo_s1);
    out.conf_member.push_back(member_k ? 1 : 0);
    if (cfg.monitor) {
      out.e1_margin.push_back(monitor.e1_margin());
      out.e2_margin.push_back(monitor.e2_margin());
    } else {
      out.e1_margin.push_back(std::nan(""));
      out.e2_margin.push_back(std::nan(""));
    }
  }
  out.e1_hold = cfg.monitor && monitor.e1_holds();
  out.e2_hold = cfg.monitor && monitor.e2_holds();
  out.variance_checks = monitor.variance_checks();
  out.variance_violations = monitor.variance_violations();
  out.certificate = policy_certificate(out.episodes, out.gap);
  out.final_regret = cum;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = cfg;

  Instance instance = build_instance(cfg.instance);
  PreparedExperiment prep;
  const TurnBasedGame* tb = nullptr;
  TurnBasedGame tb_storage;
  if (std::holds_alternative<TurnBasedGame>(instance)) {
    tb_storage = std::get<TurnBasedGame>(std::move(instance));
    prep.game = embed_turn_based(tb_storage);
    if (cfg.algo == "turn-based") tb = &tb_storage;
  } else {
    if (cfg.algo == "turn-based") {
      throw ConfigError("algo 'turn-based' requires a turn-based instance");
    }
    prep.game = std::get<LinearMixtureGame>(std::move(instance));
  }
  if (cfg.initial_state >= prep.game.num_states) {
    throw ConfigError("$.initial_state is outside the state space");
  }

  prep.learner.lambda =
      cfg.lambda ? *cfg.lambda : 1.0 / (prep.game.param_bound * prep.game.param_bound);
  prep.learner.delta = cfg.delta;
  prep.learner.cce_epsilon =
      cfg.epsilon ? *cfg.epsilon : cce_epsilon_default(prep.game.horizon, cfg.episodes);
  prep.learner.param_bound = prep.game.param_bound;
  prep.learner.episodes = cfg.episodes;
  prep.learner.initial_state = cfg.initial_state;
  prep.learner.floor = cfg.variance_floor == "main" ? VarianceFloor::MainText
                                                    : VarianceFloor::Quartered;
  prep.learner.constants =
      cfg.beta_constants == "lemma" ? BetaConstants::Lemma : BetaConstants::Proof;
  prep.cadence = cfg.eval_every > 0 ? cfg.eval_every : (cfg.episodes <= 5000 ? 1 : 10);

  result.resolved_lambda = prep.learner.lambda;
  result.resolved_epsilon = prep.learner.cce_epsilon;
  result.param_bound = prep.game.param_bound;
  result.eval_cadence = prep.cadence;

  result.runs.resize(cfg.num_seeds);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int requested = cfg.workers > 0 ? cfg.workers : (hw > 0 ? hw : 4);
  const int num_workers = std::max(1, std::min(requested, cfg.num_seeds));
  auto work = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= cfg.num_seeds) return;
      try {
        result.runs[idx] = run_one(prep, cfg, idx, tb);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (num_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(num_workers);
    for (int i = 0; i < num_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.eval_episodes = result.runs.front().episodes;
  const std::size_t points = result.eval_episodes.size();
  result.mean_regret.assign(points, 0.0);
  result.min_regret.assign(points, std::numeric_limits<double>::infinity());
  result.max_regret.assign(points, -std::numeric_limits<double>::infinity());
  int members = 0, e1 = 0, e2 = 0;
  for (const RunSummary& run : result.runs) {
    if (run.episodes != result.eval_episodes) {
      throw NumericError("run evaluation grids diverged");
    }
    for (std::size_t i = 0; i < points; ++i) {
      result.mean_regret[i] += run.cum_regret[i];
      result.min_regret[i] = std::min(result.min_regret[i], run.cum_regret[i]);
      result.max_regret[i] = std::max(result.max_regret[i], run.cum_regret[i]);
    }
    members += run.membership_all ? 1 : 0;
    e1 += run.e1_hold ? 1 : 0;
    e2 += run.e2_hold ? 1 : 0;
  }
  for (std::size_t i = 0; i < points; ++i) result.mean_regret[i] /= cfg.num_seeds;
  result.freq_membership = static_cast<double>(members) / cfg.num_seeds;
  result.freq_e1 = static_cast<double>(e1) / cfg.num_seeds;
  result.freq_e2 = static_cast<double>(e2) / cfg.num_seeds;
  return result;
}

std::string emit_outputs(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);

  for (const RunSummary& run : result.runs) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%03d.csv", run.run_index);
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw ConfigError("cannot write " + path.string());
    csv << "episode,gap,cum_regret,v_up_s1,v_lo_s1,conf_member,e1_margin,e2_margin\n";
    for (std::size_t i = 0; i < run.episodes.size(); ++i) {
      csv << run.episodes[i] << ',' << format_double(run.gap[i]) << ','
          << format_double(run.cum_regret[i]) << ',' << format_double(run.v_up_s1[i])
          << ',' << format_double(run.v_lo_s1[i]) << ',' << run.conf_member[i] << ','
          << format_double(run.e1_margin[i]) << ',' << format_double(run.e2_margin[i])
          << '\n';
    }
    if (!csv.flush()) throw ConfigError("write failed for " + path.string());
  }

  using json = nlohmann::ordered_json;
  json doc;
  doc["version"] = kVersion;
  doc["config"] = json::parse(config_to_json(result.config));
  doc["resolved"] = {{"lambda", result.resolved_lambda},
                     {"epsilon", result.resolved_epsilon},
                     {"param_bound", result.param_bound},
                     {"eval_cadence", result.eval_cadence}};
  json runs = json::array();
  for (const RunSummary& run : result.runs) {
    json r;
    r["run_index"] = run.run_index;
    r["seed"] = run.seed;
    r["final_regret"] = run.final_regret;
    r["certificate"] = {{"episode", run.certificate.episode},
                        {"gap", run.certificate.gap}};
    r["membership_all"] = run.membership_all;
    if (result.config.monitor) {
      r["e1_hold"] = run.e1_hold;
      r["e2_hold"] = run.e2_hold;
      r["variance_checks"] = run.variance_checks;
      r["variance_violations"] = run.variance_violations;
    }
    runs.push_back(std::move(r));
  }
  doc["runs"] = std::move(runs);
  json curve = json::array();
  for (std::size_t i = 0; i < result.eval_episodes.size(); ++i) {
    curve.push_back(json::array({result.eval_episodes[i], result.mean_regret[i],
                                 result.min_regret[i], result.max_regret[i]}));
  }
  doc["regret_curve"] = std::move(curve);  // [episode, mean, min, max]
  doc["event_frequency"] = {{"membership", result.freq_membership},
                            {"e1", result.config.monitor ? json(result.freq_e1) : json()},
                            {"e2", result.config.monitor ? json(result.freq_e2) : json()}};

  const std::string text = doc.dump(2) + "\n";
  const std::filesystem::path path = std::filesystem::path(out_dir) / "summary.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw ConfigError("write failed for " + path.string());
  return text;
}

}  // namespace nashmg
