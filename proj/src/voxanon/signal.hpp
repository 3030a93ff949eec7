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

// Audio I/O, framing, pitch tracking and spectral primitives.

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace voxanon {

// Mono waveform with samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Throws ValidationError on non-positive rate or non-finite samples.
  void Validate() const;
};

enum class Window { kRectangular, kHann };

struct FrameSpec {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  Window window = Window::kHann;

  std::size_t FrameLength(int sample_rate) const;
  std::size_t HopLength(int sample_rate) const;
  void Validate() const;
};

// Per-frame F0 with voicing decisions. Unvoiced frames carry 0 Hz; voiced
// frames lie within [fmin, fmax].
struct F0Track {
  std::vector<double> f0_hz;
  std::vector<bool> voiced;
  double hop_ms = 10.0;
  double fmin = 60.0;
  double fmax = 400.0;

  std::size_t size() const { return f0_hz.size(); }
  std::size_t VoicedCount() const;
  double VoicedFraction() const;
  void Validate() const;
};

// Reads RIFF/WAVE PCM16 or float32. Multi-channel audio is downmixed by
// averaging.
AudioBuffer ReadWav(const std::filesystem::path& path);

// Writes mono PCM16; samples are clipped to the representable range.
void WriteWav(const AudioBuffer& buffer, const std::filesystem::path& path);

// floor((n - frame_len) / hop) + 1, or 0 when n < frame_len.
std::size_t FrameCount(std::size_t n, std::size_t frame_len, std::size_t hop);

std::vector<double> MakeWindow(Window window, std::size_t length);

// Frames of the buffer with the window applied. Throws if the buffer is
// shorter than one frame.
std::vector<std::vector<double>> FrameSignal(const AudioBuffer& buffer,
                                             const FrameSpec& spec);

struct PitchOptions {
  double fmin = 60.0;
  double fmax = 400.0;
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  double yin_threshold = 0.15;
};

// YIN: difference function, cumulative-mean normalization, first dip below
// threshold, parabolic refinement. Frame t integrates over samples
// [t*hop, t*hop + frame_len) against lags up to sample_rate / fmin; samples
// past the end of the buffer read as zero.
F0Track ExtractF0(const AudioBuffer& buffer, const PitchOptions& opts = {});

// |X(k)| for k = 0..n_fft/2 of a zero-padded frame.
std::vector<double> MagnitudeSpectrum(std::span<const double> frame,
                                      std::size_t n_fft);

std::size_t NextPowerOfTwo(std::size_t n);

double HzToMel(double hz);
double MelToHz(double mel);

struct MfccOptions {
  int n_filters = 26;
  int n_coeffs = 12;
};

// Rows are frames, columns are cepstral coefficients 1..n_coeffs.
Eigen::MatrixXd Mfcc(const AudioBuffer& buffer, const FrameSpec& spec,
                     const MfccOptions& opts = {});

struct SpectralStats {
  double rms_db = -100.0;
  double centroid_hz = 0.0;
  double rolloff85_hz = 0.0;
  double zcr = 0.0;
};

// rms_db and zcr come from the raw samples; centroid and rolloff from the
// magnitude spectrum of the Hann-windowed frame.
SpectralStats ComputeSpectralStats(std::span<const double> frame,
                                   int sample_rate);

}  // namespace voxanon
