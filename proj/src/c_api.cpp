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

#include "nashmg/nashmg.h"

#include <cstring>
#include <json.hpp>
#include <new>
#include <string>

#include "nashmg/errors.hpp"
#include "nashmg/harness.hpp"
#include "nashmg/serialization.hpp"

struct nmg_instance {
  nashmg::Instance value;
};

namespace {

thread_local std::string g_last_error;

nmg_status set_error(nmg_status code, const char* what) {
  g_last_error = what != nullptr ? what : "unknown error";
  return code;
}

// Runs `fn`, translating the exception taxonomy into status codes.
template <typename Fn>
nmg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NMG_OK;
  } catch (const nashmg::ConfigError& e) {
    return set_error(NMG_ERROR_CONFIG, e.what());
  } catch (const nashmg::ValidationError& e) {
    return set_error(NMG_ERROR_NUMERIC, e.what());
  } catch (const nashmg::NumericError& e) {
    return set_error(NMG_ERROR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(NMG_ERROR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return set_error(NMG_ERROR_NUMERIC, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

nmg_status require(bool ok, const char* message) {
  return ok ? NMG_OK : set_error(NMG_ERROR_CONFIG, message);
}

}  // namespace

extern "C" {

const char* nmg_version(void) { return nashmg::kVersion; }

const char* nmg_last_error(void) { return g_last_error.c_str(); }

nmg_status nmg_instance_load(const char* path, nmg_instance** out) {
  if (require(path != nullptr && out != nullptr, "null argument") != NMG_OK) {
    return NMG_ERROR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] { *out = new nmg_instance{nashmg::load_instance(path)}; });
}

nmg_status nmg_instance_from_json(const char* json_text, nmg_instance** out) {
  if (require(json_text != nullptr && out != nullptr, "null argument") != NMG_OK) {
    return NMG_ERROR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] { *out = new nmg_instance{nashmg::instance_from_json(json_text)}; });
}

nmg_status nmg_instance_generate(const char* spec_json, nmg_instance** out) {
  if (require(spec_json != nullptr && out != nullptr, "null argument") != NMG_OK) {
    return NMG_ERROR_CONFIG;
  }
  *out = nullptr;
  return guarded([&] {
    const std::string wrapper =
        std::string("{\"instance\":") + spec_json + ",\"K\":1}";
    const nashmg::ExperimentConfig cfg = nashmg::parse_config(wrapper);
    *out = new nmg_instance{nashmg::build_instance(cfg.instance)};
  });
}

nmg_status nmg_instance_validate(const nmg_instance* instance) {
  if (require(instance != nullptr, "null instance") != NMG_OK) return NMG_ERROR_CONFIG;
  return guarded([&] {
    std::visit([](const auto& g) { nashmg::validate(g); }, instance->value);
  });
}

nmg_status nmg_instance_save(const nmg_instance* instance, const char* path) {
  if (require(instance != nullptr && path != nullptr, "null argument") != NMG_OK) {
    return NMG_ERROR_CONFIG;
  }
  return guarded([&] { nashmg::save_instance(instance->value, path); });
}

nmg_status nmg_instance_to_json(const nmg_instance* instance, char** out_text) {
  if (require(instance != nullptr && out_text != nullptr, "null argument") != NMG_OK) {
    return NMG_ERROR_CONFIG;
  }
  *out_text = nullptr;
  return guarded([&] { *out_text = copy_string(nashmg::instance_to_json(instance->value)); });
}

void nmg_instance_free(nmg_instance* instance) { delete instance; }

int nmg_instance_num_states(const nmg_instance* instance) {
  if (instance == nullptr) return 0;
  return std::visit([](const auto& g) { return g.num_states; }, instance->value);
}

int nmg_instance_horizon(const nmg_instance* instance) {
  if (instance == nullptr) return 0;
  return std::visit([](const auto& g) { return g.horizon; }, instance->value);
}

int nmg_instance_dim(const nmg_instance* instance) {
  if (instance == nullptr) return 0;
  return std::visit([](const auto& g) { return g.dim; }, instance->value);
}

int nmg_instance_is_turn_based(const nmg_instance* instance) {
  if (instance == nullptr) return 0;
  return std::holds_alternative<nashmg::TurnBasedGame>(instance->value) ? 1 : 0;
}

nmg_status nmg_run_experiment(const char* config_json, const char* overrides_json,
                              char** out_summary) {
  if (require(config_json != nullptr, "null config") != NMG_OK) return NMG_ERROR_CONFIG;
  if (out_summary != nullptr) *out_summary = nullptr;
  return guarded([&] {
    const nashmg::ExperimentConfig cfg = nashmg::parse_config(
        config_json, overrides_json != nullptr ? overrides_json : "");
    const nashmg::ExperimentResult result = nashmg::run_experiment(cfg);
    const std::string summary = nashmg::emit_outputs(result, cfg.out_dir);
    if (out_summary != nullptr) *out_summary = copy_string(summary);
  });
}

void nmg_string_free(char* text) { delete[] text; }

}  // extern "C"
