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

// Speaker embeddings, the external embedding pool and pseudo-speaker
// derivation by farthest selection, random subsampling and averaging.
//
// The embedding is a statistics-based stand-in for a neural x-vector: the
// per-coefficient mean and population standard deviation of 20 MFCCs over
// every frame of a speaker's audio, L2-normalized (40 dimensions).

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxanon/f0_transform.hpp"
#include "voxanon/signal.hpp"

namespace voxanon {

inline constexpr int kEmbeddingCoeffs = 20;
inline constexpr int kEmbeddingDim = 2 * kEmbeddingCoeffs;

struct SpeakerEmbedding {
  std::string speaker_id;
  std::vector<double> vector;
};

struct EmbeddingOptions {
  double min_voiced_seconds = 1.0;
  PitchOptions pitch;
};

// Throws ValidationError when the utterances hold less voiced audio than
// opts.min_voiced_seconds. The result does not depend on utterance order.
SpeakerEmbedding ExtractEmbedding(std::span<const AudioBuffer> utterances,
                                  const std::string& speaker_id = {},
                                  const EmbeddingOptions& opts = {});

// Same, with F0 tracks already computed for each utterance.
SpeakerEmbedding ExtractEmbedding(std::span<const AudioBuffer> utterances,
                                  std::span<const F0Track> tracks,
                                  const std::string& speaker_id,
                                  const EmbeddingOptions& opts = {});

// 1 - cos(a, b), in [0, 2].
double CosineDistance(std::span<const double> a, std::span<const double> b);

void NormalizeL2(std::vector<double>& v);

struct PoolEntry {
  std::string speaker_id;
  std::vector<double> embedding;
  SpeakerF0Stats f0_stats;
};

// Immutable once built. Speaker ids are unique and all embeddings share one
// dimension.
class EmbeddingPool {
 public:
  static constexpr int kFormatVersion = 1;

  void Add(PoolEntry entry);

  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t dimension() const { return dimension_; }

  // JSON container: {"format", "version", "dimension", "entries": [...]}.
  // Doubles are written with round-trip precision.
  void Save(const std::filesystem::path& path) const;
  static EmbeddingPool Load(const std::filesystem::path& path);

 private:
  std::vector<PoolEntry> entries_;
  std::size_t dimension_ = 0;
};

struct PseudoSpeakerOptions {
  std::size_t n_far = 200;
  std::size_t n_sel = 100;
};

struct PseudoSpeaker {
  std::vector<double> embedding;
  SpeakerF0Stats f0_stats;
  // Sorted ascending.
  std::vector<std::string> selected_ids;
  std::uint64_t seed = 0;
};

// Pool entries ranked by cosine distance to `source`, farthest first, ties
// by ascending speaker id. An entry with the source's speaker id is never a
// candidate.
std::vector<std::size_t> RankByDistance(const SpeakerEmbedding& source,
                                        const EmbeddingPool& pool);

// Takes the n_far farthest candidates, draws n_sel of them without
// replacement from RandomStream(seed), averages their embeddings (then
// re-normalizes) and their F0 statistics.
PseudoSpeaker DerivePseudoSpeaker(const SpeakerEmbedding& source,
                                  const EmbeddingPool& pool,
                                  const PseudoSpeakerOptions& opts,
                                  std::uint64_t seed);

struct SpeakerAudio {
  std::string speaker_id;
  std::vector<std::filesystem::path> paths;
};

struct PoolBuildError {
  std::string speaker_id;
  std::string message;
};

// One entry per speaker that passes extraction; failures are appended to
// `errors` with the speaker id and left out of the pool. Duplicate speaker ids
// in the input throw ValidationError.
EmbeddingPool BuildPool(const std::vector<SpeakerAudio>& speakers, int jobs,
                        std::vector<PoolBuildError>* errors,
                        const EmbeddingOptions& opts = {});

}  // namespace voxanon
