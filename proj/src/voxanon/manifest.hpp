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

// Dataset manifests (JSON Lines), emotion label canonicalization and
// leave-one-session-out fold construction.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voxanon/common.hpp"

namespace voxanon {

// Canonical classes, in reporting order.
enum class Emotion { kNeutral = 0, kFrustration, kSadness, kAnger, kHappiness };
inline constexpr std::size_t kNumEmotions = 5;
inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kNeutral, Emotion::kFrustration, Emotion::kSadness, Emotion::kAnger,
    Emotion::kHappiness};

std::string_view ToString(Emotion e);

// True for every label of the raw annotation vocabulary, including those
// that are dropped by MapLabels (surprise, fear, disgust, other, ...).
bool IsKnownRawLabel(std::string_view raw);

// Canonical class for a raw label, or nullopt when the label is known but
// outside the five classes or unknown altogether. "excitement" merges into
// happiness.
std::optional<Emotion> CanonicalEmotion(std::string_view raw);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory
  std::string speaker_id;
  std::string session_id;
  std::string emotion;         // raw label
  std::optional<std::string> transcript;
  std::optional<double> overlap_ratio;
};

// Collects every problem found in a manifest before failing.
class ManifestError : public ValidationError {
 public:
  explicit ManifestError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ManifestLoadOptions {
  bool check_audio = true;
};

// Unknown fields produce warnings; duplicate ids, missing required fields
// and unreadable audio paths produce a ManifestError listing each entry.
std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path,
                                        std::vector<std::string>* warnings = nullptr,
                                        const ManifestLoadOptions& opts = {});

// Paths under the manifest's directory are written relative to it.
void SaveManifest(const std::vector<ManifestEntry>& entries,
                  const std::filesystem::path& path);

struct LabeledEntry {
  ManifestEntry entry;
  Emotion label;
};

struct LabelMapping {
  std::vector<LabeledEntry> entries;
  std::map<std::string, std::size_t> dropped;  // raw label -> count
  std::vector<std::string> warnings;
};

// With strict set, an unknown raw label throws instead of being dropped.
LabelMapping MapLabels(const std::vector<ManifestEntry>& entries, bool strict = false);

struct Fold {
  std::string session_id;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// One fold per session, sessions in ascending order. Requires at least two
// sessions, every globally present class in every session, and each speaker
// confined to a single session.
std::vector<Fold> SplitLoso(const std::vector<LabeledEntry>& entries);

}  // namespace voxanon
