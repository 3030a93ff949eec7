// Copyright 2026 The voxanon Authors.
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

// C interface to the voxanon toolkit. All objects are opaque handles owned
// by the caller and released with the matching *_free function. Every call
// returns a va_status; on failure va_last_error() describes the problem for
// the calling thread until its next call into the library.

#ifndef VOXANON_VOXANON_H_
#define VOXANON_VOXANON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VOXANON_BUILDING_LIBRARY)
#define VOXANON_API __declspec(dllexport)
#else
#define VOXANON_API __declspec(dllimport)
#endif
#else
#define VOXANON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum va_status {
  VA_OK = 0,
  VA_ERR_INVALID_ARGUMENT = 1,  // null pointer, bad key, out-of-range value
  VA_ERR_VALIDATION = 2,        // inputs violate a documented precondition
  VA_ERR_IO = 3,                // file missing, unreadable or unwritable
  VA_ERR_RUNTIME = 4,           // anything else
} va_status;

VOXANON_API const char* va_version(void);
VOXANON_API const char* va_last_error(void);
VOXANON_API const char* va_status_name(va_status status);

// ---- audio ---------------------------------------------------------------

typedef struct va_audio va_audio;

VOXANON_API va_status va_audio_read(const char* path, va_audio** out);
VOXANON_API va_status va_audio_from_samples(const double* samples, size_t n,
                                            int sample_rate, va_audio** out);
VOXANON_API va_status va_audio_write(const va_audio* audio, const char* path);
VOXANON_API size_t va_audio_length(const va_audio* audio);
VOXANON_API int va_audio_sample_rate(const va_audio* audio);
// Valid until the handle is freed.
VOXANON_API const double* va_audio_samples(const va_audio* audio);
VOXANON_API void va_audio_free(va_audio* audio);

// ---- F0 tracks and transforms --------------------------------------------

typedef struct va_f0 va_f0;

typedef struct va_f0_stats {
  double mu_log;     // mean of ln F0 over voiced frames
  double sigma_log;  // population std of ln F0
  size_t n_frames;
} va_f0_stats;

// fmin/fmax in Hz; pass 0 for the defaults (60, 400).
VOXANON_API va_status va_extract_f0(const va_audio* audio, double fmin, double fmax,
                                    va_f0** out);
// f0_hz entries for unvoiced frames are ignored; voiced is 0 or 1 per frame.
VOXANON_API va_status va_f0_from_frames(const double* f0_hz, const int* voiced,
                                        size_t n_frames, double hop_ms, double fmin,
                                        double fmax, va_f0** out);
VOXANON_API size_t va_f0_length(const va_f0* track);
VOXANON_API va_status va_f0_frame(const va_f0* track, size_t index, double* f0_hz,
                                  int* voiced);
VOXANON_API void va_f0_free(va_f0* track);

VOXANON_API va_status va_f0_stats_compute(const va_f0* const* tracks, size_t n_tracks,
                                          va_f0_stats* out);
// Log-linear map of voiced frames from src statistics to tgt statistics.
VOXANON_API va_status va_f0_linear_transform(const va_f0* track, const va_f0_stats* src,
                                             const va_f0_stats* tgt, va_f0** out);
// Scales voiced deviations around the voiced linear-Hz mean by alpha.
VOXANON_API va_status va_f0_warp(const va_f0* track, double alpha, va_f0** out);

// ---- speaker pool --------------------------------------------------------

typedef struct va_pool va_pool;

// Builds one pool entry per speaker in a JSON Lines manifest. Speakers that
// fail extraction are skipped and counted in *n_errors; when error_report is
// non-null they are also written there as JSON Lines.
VOXANON_API va_status va_pool_build(const char* manifest, int jobs,
                                    const char* error_report, va_pool** out,
                                    size_t* n_errors);
VOXANON_API va_status va_pool_load(const char* path, va_pool** out);
VOXANON_API va_status va_pool_save(const va_pool* pool, const char* path);
VOXANON_API size_t va_pool_size(const va_pool* pool);
VOXANON_API void va_pool_free(va_pool* pool);

// ---- configuration -------------------------------------------------------

typedef struct va_config va_config;

// Keys: seed, scenario (comma list of baseline, ignorant, informed),
// f0_linear, f0_warp, feature_set, jobs, n_far, n_sel, pseudo_scope,
// alpha_min, alpha_max, lpc_order, mcadams_min, mcadams_max, svm_c,
// svm_gamma, strict_labels, eer, hyp_original, hyp_anonymized.
// Booleans accept true/false/1/0/yes/no.
VOXANON_API va_status va_config_new(va_config** out);
VOXANON_API va_status va_config_set(va_config* cfg, const char* key, const char* value);
VOXANON_API va_status va_config_validate(const va_config* cfg);
VOXANON_API void va_config_free(va_config* cfg);

// ---- anonymization -------------------------------------------------------

// Writes out_dir/wav, out_dir/manifest.jsonl, out_dir/anonymization_log.jsonl
// and, when some utterances fail, out_dir/errors.jsonl. Failed utterances are
// counted in *n_errors and do not stop the run.
VOXANON_API va_status va_anonymize(const char* manifest, const va_pool* pool,
                                   const va_config* cfg, const char* out_dir,
                                   size_t* n_errors);

// ---- experiments and reports ---------------------------------------------

typedef struct va_report va_report;

VOXANON_API va_status va_run_experiment(const char* manifest, const va_pool* pool,
                                        const va_config* cfg, const char* out_dir,
                                        va_report** out);
VOXANON_API va_status va_report_load(const char* path, va_report** out);
// formats: comma list of text, json, csv.
VOXANON_API va_status va_report_emit(const va_report* report, const char* out_dir,
                                     const char* formats);
// Valid until the handle is freed.
VOXANON_API const char* va_report_json(const va_report* report);
VOXANON_API va_status va_report_uar(const va_report* report, const char* scenario,
                                    double* uar);
VOXANON_API void va_report_free(va_report* report);

// Percentage change against the baseline, positive when utility degrades.
// label receives e.g. "15% degradation" and is always NUL-terminated.
VOXANON_API va_status va_relative_degradation(double baseline, double value,
                                              int higher_is_better, double* percent,
                                              char* label, size_t label_size);

// ---- word error rate -----------------------------------------------------

typedef struct va_wer {
  size_t substitutions;
  size_t deletions;
  size_t insertions;
  size_t n_ref_words;
  size_t n_missing_hypotheses;
  double wer_percent;
} va_wer;

VOXANON_API va_status va_wer_text(const char* reference, const char* hypothesis,
                                  va_wer* out);
// Both files hold utterance_id<TAB>text lines; scoring runs over the
// reference ids and a missing hypothesis counts as empty.
VOXANON_API va_status va_score_wer(const char* reference_file, const char* hypothesis_file,
                                   va_wer* out);

// ---- synthetic corpus ----------------------------------------------------

typedef struct va_synthetic_options {
  uint64_t seed;
  int n_speakers;
  int n_sessions;
  int n_classes;
  int utts_per_cell;
  int pool_speakers;  // 0 writes no pool manifest
  int pool_utts;
  int sample_rate;
  int jobs;
} va_synthetic_options;

VOXANON_API va_synthetic_options va_synthetic_defaults(void);
// Writes out_dir/manifest.jsonl (and pool_manifest.jsonl) plus WAV files.
VOXANON_API va_status va_generate_synthetic(const char* out_dir,
                                            const va_synthetic_options* opts,
                                            size_t* n_utterances);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // VOXANON_VOXANON_H_
