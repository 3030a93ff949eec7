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

// Desk-scale synthetic emotional corpus. Each speaker is a pulse-excited
// formant voice with its own base F0 and vocal-tract signature; each emotion
// is a fixed modulation profile (F0 offset and variability, level, amplitude
// modulation tempo and energy contour).

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "voxanon/manifest.hpp"
#include "voxanon/signal.hpp"

namespace voxanon {

struct SpeakerVoice {
  double base_f0_hz = 150.0;
  std::array<double, 3> formants_hz{600.0, 1500.0, 2600.0};
  std::array<double, 3> bandwidths_hz{90.0, 110.0, 160.0};
  double tilt = 0.9;  // one-pole glottal lowpass coefficient
};

struct EmotionProfile {
  Emotion emotion = Emotion::kNeutral;
  double f0_scale = 1.0;
  double variability = 1.0;   // multiplies the log-F0 excursion
  double gain_db = 0.0;
  double am_rate_hz = 3.0;
  double energy_slope_db = 0.0;  // level change from start to end
};

// Speaker voices draw base F0 from [120, 260] Hz.
SpeakerVoice RandomVoice(RandomStream& rng);

// Profiles for the first n classes in generation order: neutral, anger,
// sadness, happiness, frustration.
EmotionProfile ProfileFor(Emotion e);
Emotion GenerationClass(int index);

// Renders one utterance. When true_f0 is given it receives the generating
// F0 sampled at 10 ms hops with 25 ms frames (0 where unvoiced).
AudioBuffer RenderUtterance(const SpeakerVoice& voice, const EmotionProfile& profile,
                            std::uint64_t seed, double duration_s, int sample_rate = 16000,
                            F0Track* true_f0 = nullptr);

struct SyntheticCorpusOptions {
  std::uint64_t seed = 0;
  int n_speakers = 8;
  int n_sessions = 5;
  int n_classes = 4;
  int utts_per_cell = 5;
  // Extra neutral speakers written as a separate pool manifest; 0 disables.
  int pool_speakers = 0;
  int pool_utts = 2;
  int sample_rate = 16000;
  int jobs = 1;
};

struct SyntheticCorpus {
  std::filesystem::path manifest;
  std::filesystem::path pool_manifest;  // empty without pool speakers
  std::size_t n_utterances = 0;
  std::size_t n_pool_utterances = 0;
};

// Writes wav/ and manifest.jsonl (plus pool/ and pool_manifest.jsonl) under
// out_dir. Speaker k belongs to session k mod n_sessions and records
// n_sessions * utts_per_cell utterances per class, so the corpus holds
// n_speakers * n_sessions * n_classes * utts_per_cell utterances with
// balanced labels.
SyntheticCorpus GenerateSyntheticCorpus(const std::filesystem::path& out_dir,
                                        const SyntheticCorpusOptions& opts);

}  // namespace voxanon
