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

#include "voxanon/resynth.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "voxanon/common.hpp"

namespace voxanon {

namespace {

constexpr double kRealPoleTolerance = 1e-10;
constexpr double kPeakLimit = 0.95;

}  // namespace

void SynthConfig::Validate() const {
  if (lpc_order < 8) throw ValidationError("LPC order must be at least 8");
  if (!(hop_ms > 0.0) || hop_ms > frame_len_ms) {
    throw ValidationError("synthesis framing requires 0 < hop <= frame length");
  }
  if (!(mcadams_min > 0.0) || mcadams_max < mcadams_min ||
      (mcadams_min <= 1.0 && mcadams_max >= 1.0)) {
    throw ValidationError("McAdams range must be positive and exclude 1");
  }
}

LpcFrame LpcAnalyze(std::span<const double> frame, int order) {
  if (order < 1 || frame.size() <= static_cast<std::size_t>(order)) {
    throw ValidationError("LPC frame must be longer than the order");
  }
  const auto p = static_cast<std::size_t>(order);
  std::vector<double> r(p + 1, 0.0);
  for (std::size_t lag = 0; lag <= p; ++lag) {
    double acc = 0.0;
    for (std::size_t n = lag; n < frame.size(); ++n) acc += frame[n] * frame[n - lag];
    r[lag] = acc;
  }

  LpcFrame out;
  out.coeffs.assign(p, 0.0);
  if (r[0] == 0.0) {
    out.silent = true;
    return out;
  }
  r[0] += 1e-9;

  std::vector<double> a(p + 1, 0.0), prev(p + 1, 0.0);
  double err = r[0];
  for (std::size_t i = 1; i <= p; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    prev = a;
    a[i] = k;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    err *= (1.0 - k * k);
    if (err <= 0.0) {
      err = 0.0;
      break;
    }
  }
  std::copy(a.begin() + 1, a.end(), out.coeffs.begin());
  out.gain = std::sqrt(err / frame.size());
  return out;
}

std::vector<std::complex<double>> LpcPoles(std::span<const double> coeffs) {
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  if (p == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) companion(0, k) = coeffs[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 1; k < p; ++k) companion(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("LPC root finding failed");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> CoeffsFromPoles(std::span<const std::complex<double>> poles) {
  // poly holds monic coefficients of prod (z - pole), highest power first.
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& pole : poles) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= poly[i] * pole;
    }
    poly = std::move(next);
  }
  std::vector<double> a(poles.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = -poly[k + 1].real();
  return a;
}

bool IsStable(std::span<const double> coeffs) {
  for (const auto& pole : LpcPoles(coeffs)) {
    if (!(std::abs(pole) < 1.0)) return false;
  }
  return true;
}

LpcFrame McAdamsWarp(const LpcFrame& lpc, double coefficient) {
  if (!(coefficient > 0.0)) throw ValidationError("McAdams coefficient must be positive");
  LpcFrame out = lpc;
  if (lpc.silent || lpc.coeffs.empty()) return out;
  const auto poles = LpcPoles(lpc.coeffs);
  for (const auto& pole : poles) {
    if (!(std::abs(pole) < 1.0)) throw ValidationError("unstable LPC filter");
  }

  std::vector<std::complex<double>> warped;
  warped.reserve(poles.size());
  std::size_t upper = 0, lower = 0;
  for (const auto& pole : poles) {
    const double tol = kRealPoleTolerance * std::max(1.0, std::abs(pole));
    if (std::abs(pole.imag()) <= tol) {
      warped.emplace_back(pole.real(), 0.0);
    } else if (pole.imag() > 0.0) {
      const double angle = std::pow(std::arg(pole), coefficient);
      const auto moved = std::polar(std::abs(pole), angle);
      warped.push_back(moved);
      warped.push_back(std::conj(moved));
      ++upper;
    } else {
      ++lower;
    }
  }
  // The root finder returns conjugate pairs for a real polynomial; anything
  // else means the pairing above is unreliable, so keep the input filter.
  if (upper != lower || warped.size() != poles.size()) return out;
  out.coeffs = CoeffsFromPoles(warped);
  return out;
}

double McAdamsCoefficientFor(const PseudoSpeaker& pseudo, const SynthConfig& cfg) {
  std::uint64_t h = SplitMix64(pseudo.seed);
  for (const auto& id : pseudo.selected_ids) h = HashCombine(h, HashString(id));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return cfg.mcadams_min + (cfg.mcadams_max - cfg.mcadams_min) * u;
}

AudioBuffer Synthesize(const AudioBuffer& source, const F0Track& target_f0,
                       const PseudoSpeaker& pseudo, const SynthConfig& cfg,
                       std::uint64_t noise_seed, SynthTrace* trace) {
  cfg.Validate();
  source.Validate();
  const int sr = source.sample_rate;
  const FrameSpec spec{cfg.frame_len_ms, cfg.hop_ms, Window::kHann};
  const std::size_t len = spec.FrameLength(sr);
  const std::size_t hop = spec.HopLength(sr);
  const std::size_t n = source.size();
  const std::size_t n_frames = FrameCount(n, len, hop);
  if (n_frames == 0) throw ValidationError("source shorter than one synthesis frame");
  if (target_f0.size() != n_frames) {
    throw ValidationError("framing mismatch: target F0 has " +
                          std::to_string(target_f0.size()) + " frames, source has " +
                          std::to_string(n_frames));
  }
  const double coefficient = McAdamsCoefficientFor(pseudo, cfg);

  // Excitation over the whole utterance so pulse phase runs continuously
  // across frames. F0 is interpolated between voiced frame centres.
  std::vector<double> excitation(n, 0.0);
  RandomStream noise(noise_seed);
  const double centre = len / 2.0;
  double phase = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (static_cast<double>(i) - centre) / hop;
    const auto nearest = static_cast<std::size_t>(
        std::clamp(std::lround(pos), 0L, static_cast<long>(n_frames) - 1));
    if (!target_f0.voiced[nearest]) {
      excitation[i] = noise.Normal();
      phase = 1.0;
      continue;
    }
    double f0 = target_f0.f0_hz[nearest];
    const double lo_pos = std::floor(pos);
    if (lo_pos >= 0.0 && lo_pos + 1.0 < static_cast<double>(n_frames)) {
      const auto lo = static_cast<std::size_t>(lo_pos);
      if (target_f0.voiced[lo] && target_f0.voiced[lo + 1]) {
        const double frac = pos - lo_pos;
        f0 = (1.0 - frac) * target_f0.f0_hz[lo] + frac * target_f0.f0_hz[lo + 1];
      }
    }
    if (phase >= 1.0) {
      phase -= std::floor(phase);
      excitation[i] = std::sqrt(sr / f0);
    }
    phase += f0 / sr;
  }

  const std::vector<double> win = MakeWindow(Window::kHann, len);
  double win_power = 0.0;
  for (double w : win) win_power += w * w;
  const double win_rms = std::sqrt(win_power / len);

  std::vector<double> num(n, 0.0), den(n, 0.0);
  std::vector<double> frame(len), y;
  SynthTrace tr;
  tr.mcadams_coefficient = coefficient;
  tr.n_frames = n_frames;
  const auto p = static_cast<std::size_t>(cfg.lpc_order);

  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < len; ++i) frame[i] = source.samples[start + i] * win[i];
    for (std::size_t i = 0; i < len; ++i) den[start + i] += win[i];
    LpcFrame lpc = LpcAnalyze(frame, cfg.lpc_order);
    if (lpc.silent || lpc.gain == 0.0) {
      ++tr.n_silent;
      continue;
    }
    LpcFrame warped = McAdamsWarp(lpc, coefficient);
    if (!IsStable(warped.coeffs)) {
      warped = lpc;
      ++tr.n_unstable;
    }
    const double gain = lpc.gain / win_rms;

    // Filter from zero state, warmed up over up to one frame of history.
    const std::size_t warm = std::min(start, len);
    const std::size_t from = start - warm;
    y.assign(warm + len, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      double acc = gain * excitation[from + i];
      for (std::size_t k = 1; k <= p && k <= i; ++k) acc += warped.coeffs[k - 1] * y[i - k];
      y[i] = acc;
    }
    for (std::size_t i = 0; i < len; ++i) num[start + i] += win[i] * y[warm + i];
  }

  AudioBuffer out;
  out.sample_rate = sr;
  out.samples.assign(n, 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = den[i] > 1e-3 ? num[i] / den[i] : num[i];
    peak = std::max(peak, std::abs(out.samples[i]));
  }
  if (peak > kPeakLimit) {
    const double scale = kPeakLimit / peak;
    for (double& s : out.samples) s *= scale;
  }
  if (trace != nullptr) *trace = tr;
  return out;
}

}  // namespace voxanon
