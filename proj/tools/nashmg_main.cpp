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

// Command line front end; talks to the core exclusively through the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "nashmg/nashmg.h"

namespace {

int fail(nmg_status status) {
  std::cerr << "error: " << nmg_last_error() << "\n";
  return static_cast<int>(status);
}

int run_command(const std::string& config_path, int seeds, const std::string& out_dir,
                const std::string& algo, bool monitor, long eval_every) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config file: " << config_path << "\n";
    return static_cast<int>(NMG_ERROR_CONFIG);
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  nlohmann::ordered_json overrides = nlohmann::ordered_json::object();
  if (seeds > 0) overrides["num_seeds"] = seeds;
  if (!out_dir.empty()) overrides["out_dir"] = out_dir;
  if (!algo.empty()) overrides["algo"] = algo;
  if (monitor) overrides["monitor"] = true;
  if (eval_every > 0) overrides["eval_every"] = eval_every;
  const std::string overrides_text = overrides.dump();

  char* summary = nullptr;
  const nmg_status status =
      nmg_run_experiment(buf.str().c_str(), overrides_text.c_str(), &summary);
  if (status != NMG_OK) return fail(status);
  const nlohmann::ordered_json doc = nlohmann::ordered_json::parse(summary);
  nmg_string_free(summary);
  std::cout << "wrote " << doc["config"]["out_dir"].get<std::string>()
            << " (runs: " << doc["runs"].size() << ")\n";
  return 0;
}

int validate_command(const std::string& instance_path) {
  nmg_instance* instance = nullptr;
  nmg_status status = nmg_instance_load(instance_path.c_str(), &instance);
  if (status != NMG_OK) return fail(status);
  status = nmg_instance_validate(instance);
  if (status != NMG_OK) {
    nmg_instance_free(instance);
    return fail(status);
  }
  std::cout << instance_path << ": OK (states=" << nmg_instance_num_states(instance)
            << ", horizon=" << nmg_instance_horizon(instance)
            << ", dim=" << nmg_instance_dim(instance)
            << (nmg_instance_is_turn_based(instance) ? ", turn-based" : "") << ")\n";
  nmg_instance_free(instance);
  return 0;
}

int gen_command(const std::string& kind, const std::string& out_path, int S, int A, int B,
                int H, int d, std::uint64_t seed) {
  nlohmann::ordered_json spec;
  spec["kind"] = kind;
  if (d > 0) spec["d"] = d;
  if (S > 0) spec["S"] = S;
  if (A > 0) spec["A"] = A;
  if (B > 0) spec["B"] = B;
  if (H > 0) spec["H"] = H;
  spec["seed"] = seed;

  nmg_instance* instance = nullptr;
  nmg_status status = nmg_instance_generate(spec.dump().c_str(), &instance);
  if (status != NMG_OK) return fail(status);
  status = nmg_instance_save(instance, out_path.c_str());
  nmg_instance_free(instance);
  if (status != NMG_OK) return fail(status);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-UCRL-VTR for linear mixture Markov games"};
  app.set_version_flag("--version", std::string(nmg_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir, algo, instance_path, kind, out_path;
  int seeds = 0;
  long eval_every = 0;
  bool monitor = false;
  int S = 0, A = 0, B = 0, H = 0, d = 0;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run a learning experiment from a config file");
  run->add_option("--config", config_path, "Config JSON path")->required();
  run->add_option("--seeds", seeds, "Number of seeded runs");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--algo", algo, "simultaneous|turn-based")
      ->check(CLI::IsMember({"simultaneous", "turn-based"}));
  run->add_flag("--monitor", monitor, "Enable event monitors");
  run->add_option("--eval-every", eval_every, "Gap evaluation cadence");

  CLI::App* validate = app.add_subcommand("validate", "Validate an instance file");
  validate->add_option("--instance", instance_path, "Instance JSON path")->required();

  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance file");
  gen->add_option("--kind", kind, "Instance kind")->required();
  gen->add_option("--out", out_path, "Output path")->required();
  gen->add_option("--S", S, "Number of states");
  gen->add_option("--A", A, "Max-player actions (shared count for turn-based)");
  gen->add_option("--B", B, "Min-player actions");
  gen->add_option("--H", H, "Horizon");
  gen->add_option("--d", d, "Feature dimension");
  gen->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(NMG_ERROR_CONFIG);
  }

  if (run->parsed()) {
    return run_command(config_path, seeds, out_dir, algo, monitor, eval_every);
  }
  if (validate->parsed()) {
    return validate_command(instance_path);
  }
  return gen_command(kind, out_path, S, A, B, H, d, seed);
}
