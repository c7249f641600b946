/* Copyright 2026 The ACS Distill Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the ACS distillation library. All objects are opaque and
 * owned by the caller once returned; release them with the matching *_free
 * function. Every fallible call returns an acs_status; on failure
 * acs_last_error() describes the problem for the calling thread.
 */
#ifndef ACS_ACS_H_
#define ACS_ACS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ACS_API __declspec(dllexport)
#else
#define ACS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acs_status {
  ACS_OK = 0,
  ACS_ERR_INVALID_ARGUMENT = 1,
  ACS_ERR_CONFIG = 2,
  ACS_ERR_RUNTIME = 3,
  ACS_ERR_CONTRACT = 4,
  ACS_ERR_INTERNAL = 5
} acs_status;

typedef struct acs_config acs_config;
typedef struct acs_dataset acs_dataset;
typedef struct acs_target acs_target;

typedef void (*acs_log_fn)(const char* message, void* user_data);

ACS_API const char* acs_version(void);
/* Message of the last failed call on this thread; empty after success. */
ACS_API const char* acs_last_error(void);
ACS_API const char* acs_status_name(acs_status status);
ACS_API void acs_string_free(char* text);

/* Configuration. */
ACS_API acs_status acs_config_default(acs_config** out);
ACS_API acs_status acs_config_parse(const char* yaml, acs_config** out);
ACS_API acs_status acs_config_load(const char* path, acs_config** out);
/* Canonical YAML with every field explicit; free with acs_string_free. */
ACS_API acs_status acs_config_emit(const acs_config* config, char** out_yaml);
/* Replaces the base seed of the curriculum plan. */
ACS_API acs_status acs_config_set_seed(acs_config* config, uint64_t seed);
ACS_API void acs_config_free(acs_config* config);

/* Commands. `log` may be NULL. */
ACS_API acs_status acs_distill(const acs_config* config, const char* out_dir, size_t workers, acs_log_fn log,
                               void* user_data);
/* `config` may be NULL to reuse the dataset's own settings; `prefixes` may be
 * NULL (with n_prefixes 0) to evaluate every nested prefix. */
ACS_API acs_status acs_evaluate(const char* dataset_dir, const acs_config* config, const size_t* prefixes,
                                size_t n_prefixes, const char* out_dir, size_t workers, acs_log_fn log,
                                void* user_data);
/* kind is "guidance" or "curricula". */
ACS_API acs_status acs_sweep(const char* kind, const acs_config* config, const char* out_dir, size_t workers,
                             acs_log_fn log, void* user_data);
/* Re-runs a recorded command. *identical is 1 when every output hash
 * matches; *mismatches (may be NULL) receives a newline-separated list. */
ACS_API acs_status acs_replay(const char* manifest, const char* out_dir, size_t workers, acs_log_fn log,
                              void* user_data, int* identical, char** mismatches);

/* Distilled datasets. */
ACS_API acs_status acs_dataset_load(const char* dir, acs_dataset** out);
ACS_API size_t acs_dataset_curricula(const acs_dataset* dataset);
ACS_API size_t acs_dataset_classes(const acs_dataset* dataset);
ACS_API size_t acs_dataset_dimension(const acs_dataset* dataset);
ACS_API acs_status acs_dataset_count(const acs_dataset* dataset, size_t curriculum, int label, size_t* out);
ACS_API acs_status acs_dataset_guidance(const acs_dataset* dataset, size_t curriculum, double* out);
/* Copies the first k curricula: x_out holds n*d doubles, y_out n labels,
 * where n = k * classes * per-class size. *n_out receives n. */
ACS_API acs_status acs_dataset_points(const acs_dataset* dataset, size_t k, double* x_out, int* y_out,
                                      size_t capacity, size_t* n_out);
ACS_API acs_status acs_dataset_content_hash(const acs_dataset* dataset, char** out);
ACS_API acs_status acs_dataset_describe(const acs_dataset* dataset, char** out);
ACS_API void acs_dataset_free(acs_dataset* dataset);

/* Target mixtures. */
ACS_API acs_status acs_target_from_config(const acs_config* config, acs_target** out);
ACS_API size_t acs_target_dimension(const acs_target* target);
ACS_API size_t acs_target_classes(const acs_target* target);
/* Optimal noise prediction at noise level alpha_bar in (0, 1]. */
ACS_API acs_status acs_target_exact_eps(const acs_target* target, const double* z, size_t dimension, int label,
                                        double alpha_bar, double* eps_out);
ACS_API acs_status acs_target_log_density(const acs_target* target, const double* z, size_t dimension, int label,
                                          double alpha_bar, double* out);
/* Draws n_per_class points per class into x_out (n*d) and y_out (n). */
ACS_API acs_status acs_target_sample(const acs_target* target, size_t n_per_class, uint64_t seed, double* x_out,
                                     int* y_out, size_t capacity);
ACS_API void acs_target_free(acs_target* target);

#ifdef __cplusplus
}
#endif

#endif /* ACS_ACS_H_ */
