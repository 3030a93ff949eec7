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

// Utterance-level feature vectors for emotion recognition.
//
// egemaps_subset layout (42 values, order is stable):
//   0-5   log-F0 over voiced frames: mean, std, p20, p50, p80, p80-p20
//   6     voiced fraction
//   7-11  frame RMS dB: mean, std, p20, p50, p80
//   12-13 spectral centroid: mean, std
//   14-15 85% spectral rolloff: mean, std
//   16-17 zero-crossing rate: mean, std
//   18-41 MFCC 1-12: 12 means followed by 12 stds
// mfcc_functionals is the last block alone (24 values).

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "voxanon/signal.hpp"

namespace voxanon {

enum class FeatureSet { kEgemapsSubset, kMfccFunctionals };

inline constexpr std::size_t kEgemapsDim = 42;
inline constexpr std::size_t kMfccFunctionalsDim = 24;

std::string_view ToString(FeatureSet set);
FeatureSet ParseFeatureSet(std::string_view name);
std::size_t FeatureDimension(FeatureSet set);
std::vector<std::string> FeatureNames(FeatureSet set);

struct FeatureVector {
  std::vector<double> values;
  FeatureSet feature_set = FeatureSet::kEgemapsSubset;
};

// Buffers shorter than 0.3 s are rejected. F0 functionals use voiced frames
// only and are zero when there are none.
FeatureVector ExtractFeatures(const AudioBuffer& buffer, const F0Track& f0,
                              FeatureSet set);

FeatureVector MfccFunctionals(const AudioBuffer& buffer);

// Linear interpolation between order statistics; q in [0, 1].
double Percentile(std::vector<double> values, double q);

// Cached feature matrix, keyed by feature set and a caller-provided hash of
// the pipeline that produced the audio.
struct FeatureTable {
  static constexpr std::uint32_t kFormatVersion = 1;

  FeatureSet feature_set = FeatureSet::kEgemapsSubset;
  std::uint64_t pipeline_hash = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
};

void SaveFeatureTable(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable LoadFeatureTable(const std::filesystem::path& path);

}  // namespace voxanon
