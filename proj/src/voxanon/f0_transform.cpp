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

#include "voxanon/f0_transform.hpp"

#include <algorithm>
#include <cmath>

namespace voxanon {

void SpeakerF0Stats::Validate() const {
  if (!std::isfinite(mu_log) || !std::isfinite(sigma_log) || sigma_log < 0.0 ||
      n_frames < 1) {
    throw ValidationError("invalid speaker F0 statistics");
  }
}

void WarpConfig::Validate() const {
  if (!(alpha_min > 0.0) || alpha_max < alpha_min) {
    throw ValidationError("warp config requires 0 < alpha_min <= alpha_max");
  }
}

SpeakerF0Stats ComputeSpeakerStats(std::span<const F0Track> tracks) {
  std::size_t n = 0;
  double sum = 0.0;
  for (const F0Track& tr : tracks) {
    for (std::size_t t = 0; t < tr.size(); ++t) {
      if (tr.voiced[t]) {
        sum += std::log(tr.f0_hz[t]);
        ++n;
      }
    }
  }
  if (n == 0) throw ValidationError("no voiced frames for speaker statistics");
  const double mean = sum / n;
  double ss = 0.0;
  for (const F0Track& tr : tracks) {
    for (std::size_t t = 0; t < tr.size(); ++t) {
      if (tr.voiced[t]) {
        const double d = std::log(tr.f0_hz[t]) - mean;
        ss += d * d;
      }
    }
  }
  return {mean, std::sqrt(ss / n), n};
}

F0Track LinearTransform(const F0Track& track, const SpeakerF0Stats& src,
                        const SpeakerF0Stats& tgt,
                        const LinearTransformOptions& opts) {
  double ratio = 1.0;
  if (src.sigma_log > 0.0) {
    ratio = tgt.sigma_log / src.sigma_log;
  } else if (!opts.unit_ratio_if_degenerate) {
    throw DegenerateSourceError(
        "source speaker has zero log-F0 deviation; spread ratio undefined");
  }
  F0Track out = track;
  // Identity map; skip the log/exp round trip so the output is exact.
  if (src.mu_log == tgt.mu_log && ratio == 1.0) return out;
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (!out.voiced[t]) continue;
    double y = std::exp(tgt.mu_log + ratio * (std::log(track.f0_hz[t]) - src.mu_log));
    if (opts.clamp) y = std::clamp(y, out.fmin, out.fmax);
    out.f0_hz[t] = y;
  }
  return out;
}

double VoicedMeanHz(const F0Track& track) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < track.size(); ++t) {
    if (track.voiced[t]) {
      sum += track.f0_hz[t];
      ++n;
    }
  }
  if (n == 0) throw ValidationError("utterance has no voiced frames");
  return sum / n;
}

F0Track ApplyWarp(const F0Track& track, double alpha, bool clamp,
                  std::size_t* n_clamped) {
  const double mean = VoicedMeanHz(track);
  F0Track out = track;
  std::size_t clamped = 0;
  if (alpha == 1.0) {
    if (n_clamped != nullptr) *n_clamped = 0;
    return out;
  }
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (!out.voiced[t]) continue;
    double y = mean + (track.f0_hz[t] - mean) * alpha;
    if (clamp && (y < out.fmin || y > out.fmax)) {
      y = std::clamp(y, out.fmin, out.fmax);
      ++clamped;
    }
    out.f0_hz[t] = y;
  }
  if (n_clamped != nullptr) *n_clamped = clamped;
  return out;
}

WarpResult RandomWarp(const F0Track& track, const WarpConfig& cfg,
                      RandomStream& rng) {
  cfg.Validate();
  if (track.VoicedCount() == 0) {
    throw ValidationError("utterance has no voiced frames");
  }
  WarpResult r;
  r.alpha = rng.Uniform(cfg.alpha_min, cfg.alpha_max);
  r.track = ApplyWarp(track, r.alpha, true, &r.n_clamped);
  return r;
}

SpeakerF0Stats PseudoF0Stats(std::span<const SpeakerF0Stats> members) {
  if (members.empty()) throw ValidationError("no member statistics to average");
  SpeakerF0Stats out;
  for (const SpeakerF0Stats& m : members) {
    out.mu_log += m.mu_log;
    out.sigma_log += m.sigma_log;
    out.n_frames += m.n_frames;
  }
  out.mu_log /= static_cast<double>(members.size());
  out.sigma_log /= static_cast<double>(members.size());
  return out;
}

}  // namespace voxanon
