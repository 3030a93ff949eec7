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

#include "voxanon/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "voxanon/common.hpp"

namespace voxanon {

namespace {

constexpr double kLogFloor = 1e-10;
constexpr double kRmsFloor = 1e-5;

std::size_t MsToSamples(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::lround(ms * sample_rate / 1000.0));
}

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

// FFTW planning is not thread-safe, execution on distinct arrays is. Plans
// are created once per size under a lock and executed with the new-array
// interface.
class RealFftPlans {
 public:
  static RealFftPlans& Instance() {
    static RealFftPlans plans;
    return plans;
  }

  fftw_plan Get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out,
                                          FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  RealFftPlans() = default;
  ~RealFftPlans() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }
  std::mutex mu_;
  std::map<std::size_t, fftw_plan> plans_;
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

void AudioBuffer::Validate() const {
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  for (double s : samples) {
    if (!std::isfinite(s)) throw ValidationError("non-finite audio sample");
  }
}

std::size_t FrameSpec::FrameLength(int sample_rate) const {
  return MsToSamples(frame_len_ms, sample_rate);
}

std::size_t FrameSpec::HopLength(int sample_rate) const {
  return MsToSamples(hop_ms, sample_rate);
}

void FrameSpec::Validate() const {
  if (!(hop_ms > 0.0) || hop_ms > frame_len_ms) {
    throw ValidationError("frame spec requires 0 < hop_ms <= frame_len_ms");
  }
}

std::size_t F0Track::VoicedCount() const {
  return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
}

double F0Track::VoicedFraction() const {
  return f0_hz.empty() ? 0.0
                       : static_cast<double>(VoicedCount()) / f0_hz.size();
}

void F0Track::Validate() const {
  if (f0_hz.size() != voiced.size()) {
    throw ValidationError("F0 track length mismatch between values and flags");
  }
  for (std::size_t t = 0; t < f0_hz.size(); ++t) {
    if (!voiced[t] && f0_hz[t] != 0.0) {
      throw ValidationError("unvoiced frame with nonzero F0 at frame " +
                            std::to_string(t));
    }
    if (voiced[t] && !(f0_hz[t] >= fmin && f0_hz[t] <= fmax)) {
      throw ValidationError("voiced F0 out of range at frame " +
                            std::to_string(t));
    }
  }
}

AudioBuffer ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("truncated or non-RIFF/WAVE header: " + path.string());
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || body + 16 > bytes.size()) {
        throw IoError("truncated fmt chunk: " + path.string());
      }
      format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      if (format == 0xFFFE && len >= 26 && body + 26 <= bytes.size()) {
        format = ReadU16(bytes.data() + body + 24);  // extensible subformat
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, bytes.size() - body);
      break;
    }
    pos = body + len + (len & 1u);
  }

  if (!have_fmt || data == nullptr) {
    throw IoError("missing fmt or data chunk: " + path.string());
  }
  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32) {
    throw IoError("unsupported codec (need PCM16 or float32): " + path.string());
  }
  if (channels == 0 || rate == 0) {
    throw IoError("invalid channel count or sample rate: " + path.string());
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  const std::size_t n = data_len / frame_bytes;
  if (n == 0) throw IoError("zero-length audio: " + path.string());

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(rate);
  buf.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
      } else {
        const std::uint32_t u = ReadU32(p);
        float f;
        std::memcpy(&f, &u, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    buf.samples[i] = acc / channels;
  }
  buf.Validate();
  return buf;
}

void WriteWav(const AudioBuffer& buffer, const std::filesystem::path& path) {
  if (buffer.samples.empty()) throw ValidationError("cannot write empty audio");
  buffer.Validate();
  const auto data_len = static_cast<std::uint32_t>(buffer.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  PutU32(out, 36 + data_len);
  out.append("WAVEfmt ");
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.append("data");
  PutU32(out, data_len);
  for (double s : buffer.samples) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

std::size_t FrameCount(std::size_t n, std::size_t frame_len, std::size_t hop) {
  if (frame_len == 0 || hop == 0 || n < frame_len) return 0;
  return (n - frame_len) / hop + 1;
}

std::vector<double> MakeWindow(Window window, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (window == Window::kHann && length > 1) {
    // Periodic Hann, so 25/10 ms style overlaps add to a near-constant.
    for (std::size_t i = 0; i < length; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
    }
  }
  return w;
}

std::vector<std::vector<double>> FrameSignal(const AudioBuffer& buffer,
                                             const FrameSpec& spec) {
  spec.Validate();
  const std::size_t len = spec.FrameLength(buffer.sample_rate);
  const std::size_t hop = spec.HopLength(buffer.sample_rate);
  const std::size_t count = FrameCount(buffer.size(), len, hop);
  if (count == 0) throw ValidationError("buffer shorter than one frame");
  const std::vector<double> win = MakeWindow(spec.window, len);
  std::vector<std::vector<double>> frames(count, std::vector<double>(len));
  for (std::size_t t = 0; t < count; ++t) {
    const double* src = buffer.samples.data() + t * hop;
    for (std::size_t i = 0; i < len; ++i) frames[t][i] = src[i] * win[i];
  }
  return frames;
}

F0Track ExtractF0(const AudioBuffer& buffer, const PitchOptions& opts) {
  const int sr = buffer.sample_rate;
  if (!(opts.fmin > 0.0) || opts.fmax <= opts.fmin) {
    throw ValidationError("pitch range requires 0 < fmin < fmax");
  }
  if (sr < 2.0 * opts.fmax) {
    throw ValidationError("sample rate must be at least 2*fmax");
  }
  const std::size_t len = MsToSamples(opts.frame_len_ms, sr);
  const std::size_t hop = MsToSamples(opts.hop_ms, sr);
  if (hop == 0 || hop > len) {
    throw ValidationError("pitch framing requires 0 < hop <= frame length");
  }
  const std::size_t count = FrameCount(buffer.size(), len, hop);
  if (count == 0) throw ValidationError("buffer shorter than one frame");

  const auto tau_min = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(sr / opts.fmax)));
  const auto tau_max = static_cast<std::size_t>(std::ceil(sr / opts.fmin));

  F0Track track;
  track.hop_ms = opts.hop_ms;
  track.fmin = opts.fmin;
  track.fmax = opts.fmax;
  track.f0_hz.assign(count, 0.0);
  track.voiced.assign(count, false);

  const std::size_t n = buffer.size();
  std::vector<double> seg(len + tau_max + 1, 0.0);
  std::vector<double> diff(tau_max + 2, 0.0);
  std::vector<double> cmnd(tau_max + 2, 1.0);

  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < seg.size(); ++i) {
      seg[i] = start + i < n ? buffer.samples[start + i] : 0.0;
    }
    double running = 0.0;
    for (std::size_t tau = 1; tau <= tau_max + 1; ++tau) {
      double acc = 0.0;
      const double* a = seg.data();
      const double* b = seg.data() + tau;
      for (std::size_t j = 0; j < len; ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
      }
      diff[tau] = acc;
      running += acc;
      cmnd[tau] = running > 0.0 ? acc * static_cast<double>(tau) / running : 1.0;
    }

    std::size_t best = 0;
    for (std::size_t tau = tau_min; tau <= tau_max; ++tau) {
      if (cmnd[tau] < opts.yin_threshold) {
        while (tau + 1 <= tau_max && cmnd[tau + 1] < cmnd[tau]) ++tau;
        best = tau;
        break;
      }
    }
    if (best == 0) continue;

    double shift = 0.0;
    const double a = diff[best - 1], b = diff[best], c = diff[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom > 0.0) shift = std::clamp(0.5 * (a - c) / denom, -1.0, 1.0);
    const double f0 = sr / (static_cast<double>(best) + shift);
    if (f0 >= opts.fmin && f0 <= opts.fmax) {
      track.f0_hz[t] = f0;
      track.voiced[t] = true;
    }
  }
  return track;
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> MagnitudeSpectrum(std::span<const double> frame,
                                      std::size_t n_fft) {
  if (n_fft < frame.size()) throw ValidationError("FFT size below frame length");
  fftw_plan plan = RealFftPlans::Instance().Get(n_fft);
  std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(n_fft));
  std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(n_fft / 2 + 1));
  std::fill(in.get(), in.get() + n_fft, 0.0);
  std::copy(frame.begin(), frame.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<double> mag(n_fft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
  }
  return mag;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

namespace {

// Rows are filters, columns FFT bins 0..n_fft/2.
Eigen::MatrixXd MelFilterbank(int n_filters, std::size_t n_fft, int sample_rate) {
  const std::size_t n_bins = n_fft / 2 + 1;
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_filters, static_cast<Eigen::Index>(n_bins));
  const double mel_hi = HzToMel(sample_rate / 2.0);
  std::vector<double> edges(n_filters + 2);
  for (int i = 0; i < n_filters + 2; ++i) {
    edges[i] = MelToHz(mel_hi * i / (n_filters + 1));
  }
  for (int m = 0; m < n_filters; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (f > lo && f <= mid) {
        w = (f - lo) / (mid - lo);
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      fb(m, static_cast<Eigen::Index>(k)) = w;
    }
  }
  return fb;
}

}  // namespace

Eigen::MatrixXd Mfcc(const AudioBuffer& buffer, const FrameSpec& spec,
                     const MfccOptions& opts) {
  if (buffer.sample_rate < 8000) {
    throw ValidationError("MFCC requires sample rate >= 8 kHz");
  }
  if (opts.n_filters < 2 || opts.n_coeffs < 1 || opts.n_coeffs >= opts.n_filters) {
    throw ValidationError("MFCC requires 1 <= n_coeffs < n_filters");
  }
  const auto frames = FrameSignal(buffer, spec);
  const std::size_t n_fft = NextPowerOfTwo(frames.front().size());
  const Eigen::MatrixXd fb = MelFilterbank(opts.n_filters, n_fft, buffer.sample_rate);

  const int m_total = opts.n_filters;
  Eigen::MatrixXd dct(opts.n_coeffs, m_total);
  const double scale = std::sqrt(2.0 / m_total);
  for (int k = 1; k <= opts.n_coeffs; ++k) {
    for (int m = 0; m < m_total; ++m) {
      dct(k - 1, m) = scale * std::cos(std::numbers::pi * k * (m + 0.5) / m_total);
    }
  }

  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames.size()), opts.n_coeffs);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const std::vector<double> mag = MagnitudeSpectrum(frames[t], n_fft);
    const Eigen::Map<const Eigen::VectorXd> spec_vec(mag.data(),
                                                     static_cast<Eigen::Index>(mag.size()));
    Eigen::VectorXd energies = fb * spec_vec;
    for (Eigen::Index m = 0; m < energies.size(); ++m) {
      energies[m] = std::log(std::max(energies[m], kLogFloor));
    }
    out.row(static_cast<Eigen::Index>(t)) = (dct * energies).transpose();
  }
  return out;
}

SpectralStats ComputeSpectralStats(std::span<const double> frame, int sample_rate) {
  SpectralStats st;
  if (frame.empty()) throw ValidationError("empty frame");
  double energy = 0.0;
  for (double x : frame) energy += x * x;
  const double rms = std::sqrt(energy / frame.size());
  st.rms_db = 20.0 * std::log10(std::max(rms, kRmsFloor));

  if (frame.size() > 1) {
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < frame.size(); ++i) {
      if ((frame[i - 1] >= 0.0) != (frame[i] >= 0.0)) ++crossings;
    }
    st.zcr = static_cast<double>(crossings) / (frame.size() - 1);
  }

  const std::vector<double> win = MakeWindow(Window::kHann, frame.size());
  std::vector<double> windowed(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) windowed[i] = frame[i] * win[i];
  const std::size_t n_fft = NextPowerOfTwo(frame.size());
  const std::vector<double> mag = MagnitudeSpectrum(windowed, n_fft);
  const double bin_hz = static_cast<double>(sample_rate) / n_fft;

  double mag_sum = 0.0, weighted = 0.0, power_sum = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag_sum += mag[k];
    weighted += mag[k] * k * bin_hz;
    power_sum += mag[k] * mag[k];
  }
  if (mag_sum > 0.0) st.centroid_hz = weighted / mag_sum;
  if (power_sum > 0.0) {
    double cum = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      cum += mag[k] * mag[k];
      if (cum >= 0.85 * power_sum) {
        st.rolloff85_hz = k * bin_hz;
        break;
      }
    }
  }
  return st;
}

}  // namespace voxanon
