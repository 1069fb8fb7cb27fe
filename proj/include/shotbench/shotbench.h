// Copyright 2026 The Shotbench Authors
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

#ifndef SHOTBENCH_SHOTBENCH_H_
#define SHOTBENCH_SHOTBENCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SHOTBENCH_BUILDING_LIBRARY)
#define SB_API __attribute__((visibility("default")))
#else
#define SB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sb_status {
  SB_OK = 0,
  SB_INVALID_ARGUMENT = 1,
  SB_NOT_FOUND = 2,
  SB_PARSE = 3,
  SB_IO = 4,
  SB_OUT_OF_RANGE = 5,
  SB_INTERNAL = 6,
} sb_status;

typedef struct sb_table sb_table;

/* Called once per architecture; a nonzero return stops the walk. */
typedef int (*sb_arch_visitor)(const char* arch_text, const char* key_hex,
                               void* user);

SB_API const char* sb_version(void);

/* Message of the last failure on the calling thread. */
SB_API const char* sb_last_error(void);

/* Frees strings returned through char** out-parameters. */
SB_API void sb_string_free(char* s);

/* Fill in defaults and validate; the result lists every field. */
SB_API sb_status sb_optimizer_config_resolve(const char* json_in,
                                             char** json_out);
SB_API sb_status sb_tuner_config_resolve(const char* json_in, char** json_out);

SB_API sb_status sb_space_stats(int space, const char* convention,
                                char** json_out);
SB_API sb_status sb_convention_report(char** json_out);

/* which: "raw" visits every choice tuple, "pruned" every loose-end-free
   cell, "keys" every distinct lookup key (arch_text is then a
   representative). */
SB_API sb_status sb_enumerate(int space, const char* which,
                              sb_arch_visitor visit, void* user);

SB_API sb_status sb_canonical_key(const char* arch_text, char** hex_out);
SB_API sb_status sb_lookup_key(const char* arch_text, char** hex_out);
SB_API sb_status sb_validate_arch(const char* arch_text, char** json_out);
SB_API sb_status sb_prune(const char* arch_text, char** arch_out);

SB_API sb_status sb_table_generate(int space, uint64_t seed, sb_table** out);
SB_API sb_status sb_table_load(const char* path, sb_table** out);
SB_API sb_status sb_table_save(const sb_table* table, const char* path);
SB_API void sb_table_free(sb_table* table);
SB_API sb_status sb_table_size(const sb_table* table, size_t* out);
/* Coverage and best entries of the table for one space. */
SB_API sb_status sb_table_check(const sb_table* table, int space,
                                char** json_out);
SB_API sb_status sb_table_query(const sb_table* table, const char* arch_text,
                                int budget, double* val, double* test,
                                double* time);

SB_API sb_status sb_discretize(int space, const char* weights_json,
                               char** arch_out);

/* config_json holds optimizer fields; missing ones take defaults. */
SB_API sb_status sb_search(const sb_table* table, int space,
                           const char* config_json, char** trajectory_out);
/* Runs one search per seed; returns a JSON array of trajectories. */
SB_API sb_status sb_search_seeds(const sb_table* table, int space,
                                 const char* config_json,
                                 const uint64_t* seeds, size_t n_seeds,
                                 int workers, char** json_out);

/* trajectories_json: one trajectory or an array of them. */
SB_API sb_status sb_regret_csv(const sb_table* table, int space,
                               const char* trajectories_json, char** csv_out);
SB_API sb_status sb_aggregate_csv(const sb_table* table, int space,
                                  const char* trajectories_json,
                                  char** csv_out);

SB_API sb_status sb_tune(const sb_table* table, int space,
                         const char* algorithm, int config_space,
                         const char* tuner_json, const char* base_json,
                         char** json_out);

SB_API sb_status sb_correlate(const sb_table* table, int space,
                              const char* trajectory_json,
                              const char* options_json, char** json_out);

/* *defined is 0 when a side has no rank variance. */
SB_API sb_status sb_spearman(const double* xs, const double* ys, size_t n,
                             double* out, int* defined);

#ifdef __cplusplus
}
#endif

#endif  /* SHOTBENCH_SHOTBENCH_H_ */
