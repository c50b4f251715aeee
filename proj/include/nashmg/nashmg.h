/* Copyright 2026 The nashmg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the nashmg shared library. Objects are opaque handles,
 * every entry point returns an nmg_status, and the most recent failure
 * message is available per thread through nmg_last_error(). Status values
 * double as process exit codes for the CLI. */

#ifndef NASHMG_NASHMG_H_
#define NASHMG_NASHMG_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nmg_status {
  NMG_OK = 0,
  NMG_ERROR_CONFIG = 2,  /* malformed config/arguments/schema */
  NMG_ERROR_NUMERIC = 3  /* numeric failure or invariant violation */
} nmg_status;

typedef struct nmg_instance nmg_instance;

const char* nmg_version(void);

/* Message of the last failure on this thread; empty string if none. The
 * pointer stays valid until the next failing call on the same thread. */
const char* nmg_last_error(void);

/* --- instances ---------------------------------------------------------- */

nmg_status nmg_instance_load(const char* path, nmg_instance** out);
nmg_status nmg_instance_from_json(const char* json_text, nmg_instance** out);

/* spec_json mirrors the config "instance" object, e.g.
 * {"kind":"linear-random","d":4,"S":4,"A":2,"B":2,"H":3,"seed":7}. */
nmg_status nmg_instance_generate(const char* spec_json, nmg_instance** out);

nmg_status nmg_instance_validate(const nmg_instance* instance);
nmg_status nmg_instance_save(const nmg_instance* instance, const char* path);

/* JSON text of the instance; free with nmg_string_free. */
nmg_status nmg_instance_to_json(const nmg_instance* instance, char** out_text);

void nmg_instance_free(nmg_instance* instance);

int nmg_instance_num_states(const nmg_instance* instance);
int nmg_instance_horizon(const nmg_instance* instance);
int nmg_instance_dim(const nmg_instance* instance);
/* 1 when the instance is turn-based. */
int nmg_instance_is_turn_based(const nmg_instance* instance);

/* --- experiments -------------------------------------------------------- */

/* Runs the experiment described by config_json (see README for the schema).
 * overrides_json may be NULL or a flat JSON object replacing top-level
 * config keys. Output files are written under the configured out_dir; when
 * out_summary is non-NULL it receives the summary JSON text (free with
 * nmg_string_free). */
nmg_status nmg_run_experiment(const char* config_json, const char* overrides_json,
                              char** out_summary);

void nmg_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* NASHMG_NASHMG_H_ */
