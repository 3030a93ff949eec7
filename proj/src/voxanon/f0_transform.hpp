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

// Speaker-level log-F0 statistics and the two F0 transformations applied
// before resynthesis: a log-domain affine map towards a target speaker and a
// per-utterance random range warp around the utterance mean.

#pragma once

#include <cstddef>
#include <span>

#include "voxanon/common.hpp"
#include "voxanon/signal.hpp"

namespace voxanon {

// Mean and population standard deviation of ln(F0) over voiced frames.
struct SpeakerF0Stats {
  double mu_log = 0.0;
  double sigma_log = 0.0;
  std::size_t n_frames = 0;

  void Validate() const;
};

struct WarpConfig {
  double alpha_min = 0.8;
  double alpha_max = 1.2;

  void Validate() const;
};

// Raised by LinearTransform when the source speaker has zero log-F0 spread.
class DegenerateSourceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

SpeakerF0Stats ComputeSpeakerStats(std::span<const F0Track> tracks);

struct LinearTransformOptions {
  // Clamp results into the track's [fmin, fmax].
  bool clamp = true;
  // Use a spread ratio of 1 instead of throwing when src.sigma_log == 0.
  bool unit_ratio_if_degenerate = false;
};

// ln(y_t) = mu_tgt + (sigma_tgt / sigma_src) * (ln(x_t) - mu_src) on voiced
// frames. Unvoiced frames and voicing flags pass through unchanged.
F0Track LinearTransform(const F0Track& track, const SpeakerF0Stats& src,
                        const SpeakerF0Stats& tgt,
                        const LinearTransformOptions& opts = {});

// Linear-Hz mean over voiced frames; throws if there are none.
double VoicedMeanHz(const F0Track& track);

// y_t = m + (x_t - m) * alpha on voiced frames, m = VoicedMeanHz(track).
// With clamp, results are limited to [fmin, fmax] and the number of clamped
// frames is written to n_clamped when given.
F0Track ApplyWarp(const F0Track& track, double alpha, bool clamp = true,
                  std::size_t* n_clamped = nullptr);

struct WarpResult {
  F0Track track;
  double alpha = 1.0;
  std::size_t n_clamped = 0;
};

// Draws one alpha ~ U[alpha_min, alpha_max] and applies ApplyWarp.
WarpResult RandomWarp(const F0Track& track, const WarpConfig& cfg,
                      RandomStream& rng);

// Arithmetic mean of member mu_log and sigma_log; n_frames is summed.
SpeakerF0Stats PseudoF0Stats(std::span<const SpeakerF0Stats> members);

}  // namespace voxanon
