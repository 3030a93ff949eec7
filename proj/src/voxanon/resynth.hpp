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

// LPC analysis/resynthesis used as the anonymizing synthesizer: the source
// spectral envelope per frame, McAdams pole-angle warping keyed to the
// pseudo-speaker, and a pulse/noise excitation driven by the target F0.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "voxanon/signal.hpp"
#include "voxanon/speaker_space.hpp"

namespace voxanon {

// Predictor coefficients a_1..a_p of x[n] ~ sum_k a_k x[n-k]; the synthesis
// filter is 1 / (1 - sum_k a_k z^-k).
struct LpcFrame {
  std::vector<double> coeffs;
  double gain = 0.0;  // RMS of the prediction error
  bool voiced = false;
  bool silent = false;
};

struct SynthConfig {
  int lpc_order = 18;
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  double mcadams_min = 0.75;
  double mcadams_max = 0.95;

  void Validate() const;
};

// Autocorrelation method with Levinson-Durbin. An all-zero frame yields a
// silence marker with zero gain.
LpcFrame LpcAnalyze(std::span<const double> frame, int order);

// Roots of z^p - a_1 z^(p-1) - ... - a_p.
std::vector<std::complex<double>> LpcPoles(std::span<const double> coeffs);

// Inverse of LpcPoles for a conjugate-closed root set.
std::vector<double> CoeffsFromPoles(std::span<const std::complex<double>> poles);

bool IsStable(std::span<const double> coeffs);

// Complex pole angles phi become phi^coefficient; radii and real poles are
// kept. Throws on an unstable input filter.
LpcFrame McAdamsWarp(const LpcFrame& lpc, double coefficient);

// Deterministic map of (pseudo.seed, pseudo.selected_ids) into
// [cfg.mcadams_min, cfg.mcadams_max].
double McAdamsCoefficientFor(const PseudoSpeaker& pseudo, const SynthConfig& cfg);

struct SynthTrace {
  double mcadams_coefficient = 1.0;
  std::size_t n_frames = 0;
  std::size_t n_silent = 0;
  std::size_t n_unstable = 0;
};

// Frame-wise LPC resynthesis of `source` with excitation at `target_f0`.
// target_f0 must have exactly one value per analysis frame. Output has the
// source length and a peak no larger than 0.95.
AudioBuffer Synthesize(const AudioBuffer& source, const F0Track& target_f0,
                       const PseudoSpeaker& pseudo, const SynthConfig& cfg,
                       std::uint64_t noise_seed, SynthTrace* trace = nullptr);

}  // namespace voxanon
