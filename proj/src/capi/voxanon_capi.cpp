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

#include "voxanon/voxanon.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "voxanon/anonymize.hpp"
#include "voxanon/common.hpp"
#include "voxanon/experiment.hpp"
#include "voxanon/f0_transform.hpp"
#include "voxanon/manifest.hpp"
#include "voxanon/report.hpp"
#include "voxanon/signal.hpp"
#include "voxanon/speaker_space.hpp"
#include "voxanon/synthetic_corpus.hpp"

struct va_audio {
  voxanon::AudioBuffer buffer;
};

struct va_f0 {
  voxanon::F0Track track;
};

struct va_pool {
  voxanon::EmbeddingPool pool;
};

struct va_config {
  voxanon::ExperimentConfig experiment;
};

struct va_report {
  nlohmann::ordered_json json;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

va_status Fail(va_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
va_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const voxanon::ValidationError& e) {
    return Fail(VA_ERR_VALIDATION, e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(VA_ERR_VALIDATION, e.what());
  } catch (const voxanon::IoError& e) {
    return Fail(VA_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(VA_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(VA_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return Fail(VA_ERR_RUNTIME, e.what());
  } catch (...) {
    return Fail(VA_ERR_RUNTIME, "unknown error");
  }
}

#define VA_REQUIRE(cond, what) \
  if (!(cond)) return Fail(VA_ERR_INVALID_ARGUMENT, what)

bool ParseBool(const std::string& v, bool* out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    *out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    *out = false;
    return true;
  }
  return false;
}

template <typename T>
bool ParseNumber(const std::string& v, T* out) {
  try {
    std::size_t used = 0;
    if constexpr (std::is_same_v<T, double>) {
      *out = std::stod(v, &used);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.empty() && v[0] == '-') return false;
      *out = std::stoull(v, &used);
    } else {
      const long long x = std::stoll(v, &used);
      if (x < 0) return false;
      *out = static_cast<T>(x);
    }
    return used == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

extern "C" {

const char* va_version(void) { return "0.1.0"; }

const char* va_last_error(void) { return g_last_error.c_str(); }

const char* va_status_name(va_status status) {
  switch (status) {
    case VA_OK: return "ok";
    case VA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VA_ERR_VALIDATION: return "validation error";
    case VA_ERR_IO: return "i/o error";
    case VA_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

va_status va_audio_read(const char* path, va_audio** out) {
  VA_REQUIRE(path != nullptr && out != nullptr, "path and out must be non-null");
  return Guard([&] {
    *out = new va_audio{voxanon::ReadWav(path)};
    return VA_OK;
  });
}

va_status va_audio_from_samples(const double* samples, size_t n, int sample_rate,
                                va_audio** out) {
  VA_REQUIRE(out != nullptr && (samples != nullptr || n == 0), "null argument");
  return Guard([&] {
    voxanon::AudioBuffer b;
    b.samples.assign(samples, samples + n);
    b.sample_rate = sample_rate;
    b.Validate();
    *out = new va_audio{std::move(b)};
    return VA_OK;
  });
}

va_status va_audio_write(const va_audio* audio, const char* path) {
  VA_REQUIRE(audio != nullptr && path != nullptr, "audio and path must be non-null");
  return Guard([&] {
    voxanon::WriteWav(audio->buffer, path);
    return VA_OK;
  });
}

size_t va_audio_length(const va_audio* audio) {
  return audio == nullptr ? 0 : audio->buffer.samples.size();
}

int va_audio_sample_rate(const va_audio* audio) {
  return audio == nullptr ? 0 : audio->buffer.sample_rate;
}

const double* va_audio_samples(const va_audio* audio) {
  return audio == nullptr ? nullptr : audio->buffer.samples.data();
}

void va_audio_free(va_audio* audio) { delete audio; }

va_status va_extract_f0(const va_audio* audio, double fmin, double fmax, va_f0** out) {
  VA_REQUIRE(audio != nullptr && out != nullptr, "audio and out must be non-null");
  return Guard([&] {
    voxanon::PitchOptions opts;
    if (fmin > 0.0) opts.fmin = fmin;
    if (fmax > 0.0) opts.fmax = fmax;
    *out = new va_f0{voxanon::ExtractF0(audio->buffer, opts)};
    return VA_OK;
  });
}

va_status va_f0_from_frames(const double* f0_hz, const int* voiced, size_t n_frames,
                            double hop_ms, double fmin, double fmax, va_f0** out) {
  VA_REQUIRE(out != nullptr && ((f0_hz != nullptr && voiced != nullptr) || n_frames == 0),
             "null argument");
  return Guard([&] {
    voxanon::F0Track t;
    t.hop_ms = hop_ms;
    t.fmin = fmin;
    t.fmax = fmax;
    for (size_t i = 0; i < n_frames; ++i) {
      const bool v = voiced[i] != 0;
      t.voiced.push_back(v);
      t.f0_hz.push_back(v ? f0_hz[i] : 0.0);
    }
    t.Validate();
    *out = new va_f0{std::move(t)};
    return VA_OK;
  });
}

size_t va_f0_length(const va_f0* track) { return track == nullptr ? 0 : track->track.size(); }

va_status va_f0_frame(const va_f0* track, size_t index, double* f0_hz, int* voiced) {
  VA_REQUIRE(track != nullptr, "track must be non-null");
  VA_REQUIRE(index < track->track.size(), "frame index out of range");
  if (f0_hz != nullptr) *f0_hz = track->track.f0_hz[index];
  if (voiced != nullptr) *voiced = track->track.voiced[index] ? 1 : 0;
  return VA_OK;
}

void va_f0_free(va_f0* track) { delete track; }

va_status va_f0_stats_compute(const va_f0* const* tracks, size_t n_tracks, va_f0_stats* out) {
  VA_REQUIRE(out != nullptr && (tracks != nullptr || n_tracks == 0), "null argument");
  return Guard([&] {
    std::vector<voxanon::F0Track> copy;
    for (size_t i = 0; i < n_tracks; ++i) {
      if (tracks[i] == nullptr) return Fail(VA_ERR_INVALID_ARGUMENT, "null track");
      copy.push_back(tracks[i]->track);
    }
    const voxanon::SpeakerF0Stats s = voxanon::ComputeSpeakerStats(copy);
    *out = {s.mu_log, s.sigma_log, s.n_frames};
    return VA_OK;
  });
}

va_status va_f0_linear_transform(const va_f0* track, const va_f0_stats* src,
                                 const va_f0_stats* tgt, va_f0** out) {
  VA_REQUIRE(track != nullptr && src != nullptr && tgt != nullptr && out != nullptr,
             "null argument");
  return Guard([&] {
    const voxanon::SpeakerF0Stats s{src->mu_log, src->sigma_log, src->n_frames};
    const voxanon::SpeakerF0Stats t{tgt->mu_log, tgt->sigma_log, tgt->n_frames};
    *out = new va_f0{voxanon::LinearTransform(track->track, s, t)};
    return VA_OK;
  });
}

va_status va_f0_warp(const va_f0* track, double alpha, va_f0** out) {
  VA_REQUIRE(track != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    *out = new va_f0{voxanon::ApplyWarp(track->track, alpha)};
    return VA_OK;
  });
}

va_status va_pool_build(const char* manifest, int jobs, const char* error_report,
                        va_pool** out, size_t* n_errors) {
  VA_REQUIRE(manifest != nullptr && out != nullptr, "manifest and out must be non-null");
  VA_REQUIRE(jobs >= 1, "jobs must be at least 1");
  return Guard([&] {
    const std::vector<voxanon::ManifestEntry> entries = voxanon::LoadManifest(manifest);
    std::vector<voxanon::SpeakerAudio> speakers;
    std::map<std::string, std::size_t> index;
    for (const auto& e : entries) {
      auto [it, inserted] = index.emplace(e.speaker_id, speakers.size());
      if (inserted) speakers.push_back({e.speaker_id, {}});
      speakers[it->second].paths.push_back(e.path);
    }
    std::vector<voxanon::PoolBuildError> errors;
    voxanon::EmbeddingPool pool = voxanon::BuildPool(speakers, jobs, &errors);
    if (error_report != nullptr && !errors.empty()) {
      std::ofstream rep(error_report);
      if (!rep) throw voxanon::IoError(std::string("cannot write ") + error_report);
      for (const auto& e : errors) {
        rep << nlohmann::ordered_json{{"speaker_id", e.speaker_id}, {"error", e.message}}.dump()
            << '\n';
      }
    }
    if (n_errors != nullptr) *n_errors = errors.size();
    if (pool.size() == 0) {
      return Fail(VA_ERR_VALIDATION, "no speaker produced a usable embedding");
    }
    *out = new va_pool{std::move(pool)};
    return VA_OK;
  });
}

va_status va_pool_load(const char* path, va_pool** out) {
  VA_REQUIRE(path != nullptr && out != nullptr, "path and out must be non-null");
  return Guard([&] {
    *out = new va_pool{voxanon::EmbeddingPool::Load(path)};
    return VA_OK;
  });
}

va_status va_pool_save(const va_pool* pool, const char* path) {
  VA_REQUIRE(pool != nullptr && path != nullptr, "pool and path must be non-null");
  return Guard([&] {
    pool->pool.Save(path);
    return VA_OK;
  });
}

size_t va_pool_size(const va_pool* pool) { return pool == nullptr ? 0 : pool->pool.size(); }

void va_pool_free(va_pool* pool) { delete pool; }

va_status va_config_new(va_config** out) {
  VA_REQUIRE(out != nullptr, "out must be non-null");
  return Guard([&] {
    *out = new va_config{};
    return VA_OK;
  });
}

va_status va_config_set(va_config* cfg, const char* key, const char* value) {
  VA_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
  return Guard([&]() -> va_status {
    const std::string k = key;
    const std::string v = value;
    voxanon::ExperimentConfig& e = cfg->experiment;
    voxanon::AnonymizationConfig& a = e.anonymization;
    auto bad = [&] {
      return Fail(VA_ERR_INVALID_ARGUMENT, "invalid value '" + v + "' for " + k);
    };
    bool ok = true;
    if (k == "seed") {
      ok = ParseNumber(v, &a.seed);
    } else if (k == "scenario") {
      std::vector<voxanon::Scenario> list;
      std::string item;
      for (std::size_t i = 0; i <= v.size(); ++i) {
        if (i == v.size() || v[i] == ',') {
          if (item.empty()) return bad();
          const voxanon::Scenario s = voxanon::ParseScenario(item);
          if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
          item.clear();
        } else if (v[i] != ' ') {
          item += v[i];
        }
      }
      e.scenarios = list;
    } else if (k == "f0_linear") {
      ok = ParseBool(v, &a.flags.linear_transform);
    } else if (k == "f0_warp") {
      ok = ParseBool(v, &a.flags.random_warp);
    } else if (k == "feature_set") {
      e.feature_set = voxanon::ParseFeatureSet(v);
    } else if (k == "jobs") {
      ok = ParseNumber(v, &a.jobs) && a.jobs >= 1;
    } else if (k == "n_far") {
      ok = ParseNumber(v, &a.pseudo.n_far);
    } else if (k == "n_sel") {
      ok = ParseNumber(v, &a.pseudo.n_sel);
    } else if (k == "pseudo_scope") {
      if (v == "speaker" || v == "per_speaker") {
        a.scope = voxanon::PseudoSpeakerScope::kPerSpeaker;
      } else if (v == "utterance" || v == "per_utterance") {
        a.scope = voxanon::PseudoSpeakerScope::kPerUtterance;
      } else {
        ok = false;
      }
    } else if (k == "alpha_min") {
      ok = ParseNumber(v, &a.warp.alpha_min);
    } else if (k == "alpha_max") {
      ok = ParseNumber(v, &a.warp.alpha_max);
    } else if (k == "lpc_order") {
      ok = ParseNumber(v, &a.synth.lpc_order);
    } else if (k == "mcadams_min") {
      ok = ParseNumber(v, &a.synth.mcadams_min);
    } else if (k == "mcadams_max") {
      ok = ParseNumber(v, &a.synth.mcadams_max);
    } else if (k == "svm_c") {
      ok = ParseNumber(v, &e.svm.c) && e.svm.c > 0.0;
    } else if (k == "svm_gamma") {
      if (v == "scale") {
        e.svm.gamma = 0.0;
      } else {
        ok = ParseNumber(v, &e.svm.gamma) && e.svm.gamma > 0.0;
      }
    } else if (k == "strict_labels") {
      ok = ParseBool(v, &e.strict_labels);
    } else if (k == "eer") {
      ok = ParseBool(v, &e.compute_eer);
    } else if (k == "hyp_original") {
      if (v.empty()) e.hyp_original.reset(); else e.hyp_original = v;
    } else if (k == "hyp_anonymized") {
      if (v.empty()) e.hyp_anonymized.reset(); else e.hyp_anonymized = v;
    } else {
      return Fail(VA_ERR_INVALID_ARGUMENT, "unknown config key '" + k + "'");
    }
    return ok ? VA_OK : bad();
  });
}

va_status va_config_validate(const va_config* cfg) {
  VA_REQUIRE(cfg != nullptr, "cfg must be non-null");
  return Guard([&] {
    cfg->experiment.anonymization.Validate();
    if (cfg->experiment.scenarios.empty()) {
      throw voxanon::ValidationError("no scenarios configured");
    }
    return VA_OK;
  });
}

void va_config_free(va_config* cfg) { delete cfg; }

va_status va_anonymize(const char* manifest, const va_pool* pool, const va_config* cfg,
                       const char* out_dir, size_t* n_errors) {
  VA_REQUIRE(manifest != nullptr && pool != nullptr && cfg != nullptr && out_dir != nullptr,
             "null argument");
  return Guard([&] {
    cfg->experiment.anonymization.Validate();
    const auto entries = voxanon::LoadManifest(manifest);
    const voxanon::AnonymizationResult r = voxanon::AnonymizeCorpus(
        entries, pool->pool, cfg->experiment.anonymization, out_dir);
    if (n_errors != nullptr) *n_errors = r.errors.size();
    return VA_OK;
  });
}

va_status va_run_experiment(const char* manifest, const va_pool* pool, const va_config* cfg,
                            const char* out_dir, va_report** out) {
  VA_REQUIRE(manifest != nullptr && pool != nullptr && cfg != nullptr && out_dir != nullptr &&
                 out != nullptr,
             "null argument");
  return Guard([&] {
    const voxanon::ExperimentReport report =
        voxanon::RunExperiment(manifest, pool->pool, cfg->experiment, out_dir);
    auto* r = new va_report;
    r->json = voxanon::ReportToJson(report);
    r->text = r->json.dump(2);
    *out = r;
    return VA_OK;
  });
}

va_status va_report_load(const char* path, va_report** out) {
  VA_REQUIRE(path != nullptr && out != nullptr, "path and out must be non-null");
  return Guard([&] {
    auto* r = new va_report;
    r->json = voxanon::LoadReportJson(path);
    r->text = r->json.dump(2);
    *out = r;
    return VA_OK;
  });
}

va_status va_report_emit(const va_report* report, const char* out_dir, const char* formats) {
  VA_REQUIRE(report != nullptr && out_dir != nullptr, "report and out_dir must be non-null");
  return Guard([&] {
    voxanon::EmitReport(report->json, out_dir,
                        voxanon::ParseReportFormats(formats ? formats : "json,text,csv"));
    return VA_OK;
  });
}

const char* va_report_json(const va_report* report) {
  return report == nullptr ? nullptr : report->text.c_str();
}

va_status va_report_uar(const va_report* report, const char* scenario, double* uar) {
  VA_REQUIRE(report != nullptr && scenario != nullptr && uar != nullptr, "null argument");
  return Guard([&] {
    for (const auto& s : report->json.at("scenarios")) {
      if (s.at("scenario").get<std::string>() == scenario) {
        *uar = s.at("uar").get<double>();
        return VA_OK;
      }
    }
    return Fail(VA_ERR_VALIDATION, std::string("report has no scenario '") + scenario + "'");
  });
}

void va_report_free(va_report* report) { delete report; }

va_status va_relative_degradation(double baseline, double value, int higher_is_better,
                                  double* percent, char* label, size_t label_size) {
  VA_REQUIRE(percent != nullptr, "percent must be non-null");
  return Guard([&] {
    *percent = voxanon::RelativeDegradation(baseline, value, higher_is_better != 0);
    if (label != nullptr && label_size > 0) {
      const std::string s = voxanon::DegradationLabel(*percent);
      const std::size_t n = std::min(s.size(), label_size - 1);
      std::memcpy(label, s.data(), n);
      label[n] = '\0';
    }
    return VA_OK;
  });
}

namespace {
void FillWer(const voxanon::WerResult& w, size_t missing, va_wer* out) {
  *out = {w.substitutions, w.deletions, w.insertions, w.n_ref, missing, w.wer_percent};
}
}  // namespace

va_status va_wer_text(const char* reference, const char* hypothesis, va_wer* out) {
  VA_REQUIRE(reference != nullptr && hypothesis != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    FillWer(voxanon::WerText(reference, hypothesis), 0, out);
    return VA_OK;
  });
}

va_status va_score_wer(const char* reference_file, const char* hypothesis_file, va_wer* out) {
  VA_REQUIRE(reference_file != nullptr && hypothesis_file != nullptr && out != nullptr,
             "null argument");
  return Guard([&] {
    std::size_t missing = 0;
    const voxanon::WerResult w =
        voxanon::ScoreCorpusWer(voxanon::LoadTranscriptFile(reference_file),
                                voxanon::LoadTranscriptFile(hypothesis_file), &missing);
    FillWer(w, missing, out);
    return VA_OK;
  });
}

va_synthetic_options va_synthetic_defaults(void) {
  const voxanon::SyntheticCorpusOptions d;
  return {d.seed,          d.n_speakers, d.n_sessions,  d.n_classes, d.utts_per_cell,
          d.pool_speakers, d.pool_utts,  d.sample_rate, d.jobs};
}

va_status va_generate_synthetic(const char* out_dir, const va_synthetic_options* opts,
                                size_t* n_utterances) {
  VA_REQUIRE(out_dir != nullptr && opts != nullptr, "out_dir and opts must be non-null");
  return Guard([&] {
    voxanon::SyntheticCorpusOptions o;
    o.seed = opts->seed;
    o.n_speakers = opts->n_speakers;
    o.n_sessions = opts->n_sessions;
    o.n_classes = opts->n_classes;
    o.utts_per_cell = opts->utts_per_cell;
    o.pool_speakers = opts->pool_speakers;
    o.pool_utts = opts->pool_utts;
    o.sample_rate = opts->sample_rate;
    o.jobs = opts->jobs;
    const voxanon::SyntheticCorpus c = voxanon::GenerateSyntheticCorpus(out_dir, o);
    if (n_utterances != nullptr) *n_utterances = c.n_utterances;
    return VA_OK;
  });
}

}  // extern "C"
