/* Copyright 2026 The LRME Authors.
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

/* C interface to the latent relation mapping engine.
 *
 * Every object is an opaque handle created by an lrme_*_create/open/load
 * function and released by the matching lrme_*_destroy. Every fallible call
 * returns an lrme_status; on failure a description is available from
 * lrme_last_error() on the calling thread until the next call. Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with lrme_string_free().
 */

#ifndef LRME_LRME_H_
#define LRME_LRME_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LRME_BUILDING_LIBRARY)
#    define LRME_API __declspec(dllexport)
#  else
#    define LRME_API __declspec(dllimport)
#  endif
#else
#  define LRME_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as the command-line exit codes. */
typedef enum lrme_status {
  LRME_OK = 0,
  LRME_ERR_USAGE = 1,    /* bad argument, option or configuration value */
  LRME_ERR_DATA = 2,     /* unreadable, malformed or inconsistent input */
  LRME_ERR_BUDGET = 3,   /* m! over the exhaustive-search budget */
  LRME_ERR_INTERNAL = 4
} lrme_status;

typedef struct lrme_config lrme_config;
typedef struct lrme_corpus lrme_corpus;
typedef struct lrme_dataset lrme_dataset;
typedef struct lrme_space lrme_space;

LRME_API const char* lrme_version(void);
LRME_API const char* lrme_last_error(void);
LRME_API void lrme_string_free(char* s);
/* Diagnostics go to stderr. level: "off", "warn" or "info" (the default). */
LRME_API lrme_status lrme_set_log_level(const char* level);

/* Configuration. Keys: corpus, cache, k, t, transform, svd, mode, provider,
 * seed, ties, pmi-window, max-terms, max-phrases, pos-file. */
LRME_API lrme_status lrme_config_create(lrme_config** out);
LRME_API void lrme_config_destroy(lrme_config* config);
LRME_API lrme_status lrme_config_set(lrme_config* config, const char* key,
                                     const char* value);
/* Current value of one key, in the form lrme_config_set accepts. */
LRME_API lrme_status lrme_config_get(const lrme_config* config,
                                     const char* key, char** value);
LRME_API lrme_status lrme_config_load_file(lrme_config* config,
                                           const char* path);

/* Corpus index. lrme_corpus_open ingests every .txt file below corpus_dir,
 * reusing <cache_dir>/corpus-<digest>.idx when present; cache_dir may be
 * NULL. cache_hit may be NULL. */
LRME_API lrme_status lrme_corpus_open(const char* corpus_dir,
                                      const char* cache_dir,
                                      lrme_corpus** out, int* cache_hit);
LRME_API lrme_status lrme_corpus_load(const char* index_path,
                                      lrme_corpus** out);
LRME_API lrme_status lrme_corpus_save(const lrme_corpus* corpus,
                                      const char* index_path);
LRME_API void lrme_corpus_destroy(lrme_corpus* corpus);
LRME_API uint64_t lrme_corpus_total_tokens(const lrme_corpus* corpus);
LRME_API size_t lrme_corpus_document_count(const lrme_corpus* corpus);
/* Hex digest owned by the handle. */
LRME_API const char* lrme_corpus_digest(const lrme_corpus* corpus);
/* Number of phrase windows matching "[0-1] x [0-3] y [0-1]". */
LRME_API lrme_status lrme_corpus_count_phrases(const lrme_corpus* corpus,
                                               const char* x, const char* y,
                                               size_t* count);

/* Problem sets. */
LRME_API lrme_status lrme_dataset_builtin(lrme_dataset** out);
LRME_API lrme_status lrme_dataset_load(const char* path, lrme_dataset** out);
LRME_API lrme_status lrme_dataset_parse(const char* json, lrme_dataset** out);
LRME_API void lrme_dataset_destroy(lrme_dataset* dataset);
LRME_API size_t lrme_dataset_size(const lrme_dataset* dataset);
LRME_API lrme_status lrme_dataset_to_json(const lrme_dataset* dataset,
                                          char** json);

/* Workflows. corpus may be NULL for modes that do not read it. A budget
 * refusal of any problem yields LRME_ERR_BUDGET while the outputs still hold
 * every other problem. */
LRME_API lrme_status lrme_solve(const lrme_dataset* dataset,
                                const lrme_corpus* corpus,
                                const lrme_config* config, char** output);
LRME_API lrme_status lrme_eval(const lrme_dataset* dataset,
                               const lrme_corpus* corpus,
                               const lrme_config* config, char** report_tsv,
                               char** diagnostics_json);
LRME_API lrme_status lrme_coherence(const lrme_dataset* dataset,
                                    const lrme_corpus* corpus,
                                    const lrme_config* config, int m_prime,
                                    int trials, char** report_tsv,
                                    char** diagnostics_json);
/* grid: "standard" or e.g. "k=50:400:50;t=20;transform=ppmic;svd=on". */
LRME_API lrme_status lrme_sweep(const lrme_dataset* dataset,
                                const lrme_corpus* corpus,
                                const lrme_config* config, const char* grid,
                                char** report_tsv, char** diagnostics_json);

/* Relation space over a dataset's pairs. Terms are plain strings; multiword
 * terms use single spaces. */
LRME_API lrme_status lrme_space_build(const lrme_dataset* dataset,
                                      const lrme_corpus* corpus,
                                      const lrme_config* config,
                                      lrme_space** out);
LRME_API lrme_status lrme_space_load(const char* path, lrme_space** out);
LRME_API lrme_status lrme_space_save(const lrme_space* space,
                                     const char* path);
LRME_API void lrme_space_destroy(lrme_space* space);
LRME_API size_t lrme_space_rows(const lrme_space* space);
LRME_API lrme_status lrme_space_similarity(const lrme_space* space,
                                           const char* a, const char* b,
                                           const char* c, const char* d,
                                           double* similarity);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* LRME_LRME_H_ */
