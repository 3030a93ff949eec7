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

// Corpus anonymization: per speaker, embedding -> pseudo-speaker; per
// utterance, F0 extraction -> optional log-linear F0 map -> optional random
// warp -> LPC resynthesis.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voxanon/f0_transform.hpp"
#include "voxanon/manifest.hpp"
#include "voxanon/resynth.hpp"
#include "voxanon/speaker_space.hpp"

namespace voxanon {

struct PipelineFlags {
  bool linear_transform = false;
  bool random_warp = false;
};

enum class PseudoSpeakerScope { kPerSpeaker, kPerUtterance };

struct AnonymizationConfig {
  std::uint64_t seed = 0;
  PipelineFlags flags;
  PseudoSpeakerOptions pseudo;
  PseudoSpeakerScope scope = PseudoSpeakerScope::kPerSpeaker;
  WarpConfig warp;
  SynthConfig synth;
  PitchOptions pitch;
  int jobs = 1;

  // random_warp requires linear_transform.
  void Validate() const;
};

struct SpeakerProvenance {
  std::string speaker_id;
  SpeakerF0Stats source_stats;
  std::optional<PseudoSpeaker> pseudo;  // set for per-speaker scope
  double mcadams_coefficient = 1.0;
  bool degenerate_f0 = false;
};

struct UtteranceProvenance {
  std::string id;
  std::string speaker_id;
  std::vector<std::string> steps;  // processing stages in order
  std::optional<double> alpha;
  std::size_t n_clamped = 0;
  std::vector<std::string> pseudo_ids;
  double mcadams_coefficient = 1.0;
};

struct EntryError {
  std::string id;
  std::string message;
};

struct AnonymizationResult {
  std::vector<ManifestEntry> entries;   // anonymized manifest, input order
  std::vector<SpeakerProvenance> speakers;
  std::vector<UtteranceProvenance> utterances;
  std::vector<EntryError> errors;
};

// Writes <out_dir>/wav/<id>.wav, <out_dir>/manifest.jsonl,
// <out_dir>/anonymization_log.jsonl and, when anything failed,
// <out_dir>/errors.jsonl. Failed utterances are reported and skipped; the
// run continues.
AnonymizationResult AnonymizeCorpus(const std::vector<ManifestEntry>& entries,
                                    const EmbeddingPool& pool,
                                    const AnonymizationConfig& cfg,
                                    const std::filesystem::path& out_dir);

}  // namespace voxanon
