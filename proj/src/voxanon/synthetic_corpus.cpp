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

#include "voxanon/synthetic_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "voxanon/common.hpp"

namespace voxanon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBaseLogF0Excursion = 0.06;
constexpr double kBaseRms = 0.03;
constexpr double kF0Floor = 70.0;
constexpr double kF0Ceiling = 390.0;

constexpr const char* kVocabulary[] = {
    "the", "a", "we", "you", "they", "never", "always", "said", "told", "went",
    "home", "today", "later", "here", "there", "really", "not", "know", "think",
    "want", "leave", "stay", "now", "again", "why", "what", "how", "right", "okay",
    "fine"};

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool voiced = false;
  bool noise = false;
  double formant_shift = 1.0;
};

std::vector<Segment> Segmentation(std::size_t n, int sr, RandomStream& rng) {
  std::vector<Segment> segs;
  const auto ms = [sr](double v) { return static_cast<std::size_t>(v * sr / 1000.0); };
  std::size_t pos = ms(50);
  segs.push_back({0, pos, false, false, 1.0});
  const std::size_t tail = ms(50);
  while (pos + tail < n) {
    const std::size_t voiced_len = ms(rng.Uniform(150.0, 320.0));
    Segment v{pos, std::min(n - tail, pos + voiced_len), true, false, rng.Uniform(0.88, 1.12)};
    segs.push_back(v);
    pos = v.end;
    if (pos + tail >= n) break;
    const std::size_t gap_len = ms(rng.Uniform(30.0, 70.0));
    Segment g{pos, std::min(n - tail, pos + gap_len), false, rng.Uniform() < 0.6, 1.0};
    segs.push_back(g);
    pos = g.end;
  }
  segs.push_back({pos, n, false, false, 1.0});
  return segs;
}

// Two-pole resonator with unit gain at DC.
struct Resonator {
  double b0 = 1.0, a1 = 0.0, a2 = 0.0, y1 = 0.0, y2 = 0.0;

  void Set(double freq, double bw, int sr) {
    const double r = std::exp(-std::numbers::pi * bw / sr);
    const double theta = kTwoPi * freq / sr;
    a1 = 2.0 * r * std::cos(theta);
    a2 = -r * r;
    b0 = 1.0 - a1 - a2;
    y1 = y2 = 0.0;
  }
  double Step(double x) {
    const double y = b0 * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

SpeakerVoice RandomVoice(RandomStream& rng) {
  SpeakerVoice v;
  v.base_f0_hz = rng.Uniform(120.0, 260.0);
  const double tract = rng.Uniform(0.85, 1.2);
  v.formants_hz = {rng.Uniform(550.0, 750.0) * tract, rng.Uniform(1200.0, 1900.0) * tract,
                   rng.Uniform(2300.0, 3000.0) * tract};
  v.bandwidths_hz = {rng.Uniform(70.0, 120.0), rng.Uniform(90.0, 150.0),
                     rng.Uniform(120.0, 200.0)};
  v.tilt = rng.Uniform(0.8, 0.95);
  return v;
}

Emotion GenerationClass(int index) {
  static constexpr Emotion kOrder[] = {Emotion::kNeutral, Emotion::kAnger, Emotion::kSadness,
                                       Emotion::kHappiness, Emotion::kFrustration};
  if (index < 0 || index >= 5) throw ValidationError("class index out of range");
  return kOrder[index];
}

EmotionProfile ProfileFor(Emotion e) {
  switch (e) {
    case Emotion::kNeutral: return {e, 1.0, 1.0, 0.0, 3.0, 0.0};
    case Emotion::kAnger: return {e, 1.3, 2.0, 6.0, 6.0, 0.0};
    case Emotion::kSadness: return {e, 0.7, 0.5, -6.0, 1.5, -4.0};
    case Emotion::kHappiness: return {e, 1.15, 2.0, 0.0, 4.5, 4.0};
    case Emotion::kFrustration: return {e, 0.85, 1.0, 3.0, 2.0, 0.0};
  }
  return {};
}

AudioBuffer RenderUtterance(const SpeakerVoice& voice, const EmotionProfile& profile,
                            std::uint64_t seed, double duration_s, int sample_rate,
                            F0Track* true_f0) {
  RandomStream rng(seed);
  const int sr = sample_rate;
  const auto n = static_cast<std::size_t>(duration_s * sr);
  const std::vector<Segment> segs = Segmentation(n, sr, rng);

  const double r1 = rng.Uniform(2.0, 3.5), r2 = rng.Uniform(4.0, 6.0);
  const double p1 = rng.Uniform(0.0, kTwoPi), p2 = rng.Uniform(0.0, kTwoPi);
  const double am_phase = rng.Uniform(0.0, kTwoPi);
  const double jitter_db = rng.Uniform(-1.0, 1.0);
  const double centre_log = std::log(voice.base_f0_hz * profile.f0_scale);
  // 0.6 sin + 0.8 sin has unit standard deviation.
  auto f0_at = [&](double t) {
    const double s = 0.6 * std::sin(kTwoPi * r1 * t + p1) + 0.8 * std::sin(kTwoPi * r2 * t + p2);
    const double declination = -0.05 * t / duration_s;
    const double lf = centre_log + declination + profile.variability * kBaseLogF0Excursion * s;
    return std::clamp(std::exp(lf), kF0Floor, kF0Ceiling);
  };

  std::vector<double> x(n, 0.0);
  std::vector<bool> voiced(n, false);
  double phase = 1.0;
  double glottal = 0.0;
  for (const Segment& seg : segs) {
    if (seg.begin >= seg.end) continue;
    const std::size_t len = seg.end - seg.begin;
    const std::size_t ramp = std::min<std::size_t>(len / 2, static_cast<std::size_t>(0.02 * sr));
    if (seg.voiced) {
      std::array<Resonator, 3> res;
      for (int k = 0; k < 3; ++k) {
        res[k].Set(voice.formants_hz[k] * seg.formant_shift, voice.bandwidths_hz[k], sr);
      }
      phase = 1.0;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        const double f0 = f0_at(static_cast<double>(i) / sr);
        double pulse = 0.0;
        if (phase >= 1.0) {
          phase -= std::floor(phase);
          pulse = 1.0;
        }
        phase += f0 / sr;
        glottal = pulse + voice.tilt * glottal;
        double y = glottal;
        for (auto& r : res) y = r.Step(y);
        x[i] = y;
        voiced[i] = true;
      }
    } else if (seg.noise) {
      double prev = 0.0;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        const double w = rng.Normal();
        x[i] = 0.15 * (w - prev);
        prev = w;
      }
    }
    for (std::size_t i = 0; i < ramp; ++i) {
      const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      x[seg.begin + i] *= g;
      x[seg.end - 1 - i] *= g;
    }
  }

  double ss = 0.0;
  std::size_t nv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (voiced[i]) {
      ss += x[i] * x[i];
      ++nv;
    }
  }
  const double voiced_rms = nv > 0 ? std::sqrt(ss / nv) : 1.0;
  const double level = kBaseRms / (voiced_rms > 0.0 ? voiced_rms : 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double am = 1.0 + 0.4 * std::sin(kTwoPi * profile.am_rate_hz * t + am_phase);
    const double db = profile.gain_db + jitter_db + profile.energy_slope_db * (t / duration_s - 0.5);
    x[i] *= level * am * std::pow(10.0, db / 20.0);
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.99) {
    for (double& v : x) v *= 0.99 / peak;
  }

  if (true_f0 != nullptr) {
    const std::size_t len = static_cast<std::size_t>(0.025 * sr);
    const std::size_t hop = static_cast<std::size_t>(0.010 * sr);
    const std::size_t frames = FrameCount(n, len, hop);
    true_f0->hop_ms = 10.0;
    true_f0->f0_hz.assign(frames, 0.0);
    true_f0->voiced.assign(frames, false);
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t start = t * hop;
      if (std::all_of(voiced.begin() + static_cast<std::ptrdiff_t>(start),
                      voiced.begin() + static_cast<std::ptrdiff_t>(start + len),
                      [](bool v) { return v; })) {
        true_f0->voiced[t] = true;
        true_f0->f0_hz[t] = f0_at((start + len / 2.0) / sr);
      }
    }
  }

  AudioBuffer buf;
  buf.sample_rate = sr;
  buf.samples = std::move(x);
  return buf;
}

namespace {

std::string Pad(int v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*d", width, v);
  return buf;
}

std::string RandomTranscript(RandomStream& rng) {
  const int words = 4 + static_cast<int>(rng.Below(5));
  std::string s;
  for (int w = 0; w < words; ++w) {
    if (w) s += ' ';
    s += kVocabulary[rng.Below(std::size(kVocabulary))];
  }
  return s;
}

struct Job {
  ManifestEntry entry;
  SpeakerVoice voice;
  EmotionProfile profile;
  std::uint64_t seed;
  double duration;
};

void RenderJobs(const std::vector<Job>& jobs, int sr, int n_jobs) {
  ParallelFor(jobs.size(), n_jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    WriteWav(RenderUtterance(j.voice, j.profile, j.seed, j.duration, sr), j.entry.path);
  });
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const std::filesystem::path& out_dir,
                                        const SyntheticCorpusOptions& opts) {
  if (opts.n_speakers < 1 || opts.n_sessions < 2 || opts.n_classes < 2 ||
      opts.n_classes > 5 || opts.utts_per_cell < 1) {
    throw ValidationError(
        "synthetic corpus needs >= 1 speaker, >= 2 sessions, 2..5 classes, >= 1 utterance per cell");
  }
  if (opts.n_speakers < opts.n_sessions) {
    throw ValidationError("synthetic corpus needs at least one speaker per session");
  }
  std::filesystem::create_directories(out_dir / "wav");

  std::vector<Job> jobs;
  for (int s = 0; s < opts.n_speakers; ++s) {
    const std::string spk = "spk" + Pad(s, 2);
    RandomStream voice_rng(DeriveSeed(opts.seed, "voice:" + spk));
    const SpeakerVoice voice = RandomVoice(voice_rng);
    const std::string session = "ses" + Pad(s % opts.n_sessions + 1, 1);
    for (int c = 0; c < opts.n_classes; ++c) {
      const Emotion emo = GenerationClass(c);
      for (int k = 0; k < opts.n_sessions * opts.utts_per_cell; ++k) {
        Job j;
        j.entry.id = spk + "_" + std::string(ToString(emo)) + "_" + Pad(k, 3);
        j.entry.speaker_id = spk;
        j.entry.session_id = session;
        // Half of the happiness takes carry the raw "excitement" annotation.
        j.entry.emotion = emo == Emotion::kHappiness && k % 2 == 1 ? "excitement"
                                                                   : std::string(ToString(emo));
        j.entry.path = out_dir / "wav" / (j.entry.id + ".wav");
        j.seed = DeriveSeed(opts.seed, "utt:" + j.entry.id);
        RandomStream meta(HashCombine(j.seed, 1));
        j.duration = meta.Uniform(1.8, 2.4);
        j.entry.transcript = RandomTranscript(meta);
        j.voice = voice;
        j.profile = ProfileFor(emo);
        jobs.push_back(std::move(j));
      }
    }
  }
  RenderJobs(jobs, opts.sample_rate, opts.jobs);

  SyntheticCorpus out;
  out.manifest = out_dir / "manifest.jsonl";
  std::vector<ManifestEntry> entries;
  for (const Job& j : jobs) entries.push_back(j.entry);
  SaveManifest(entries, out.manifest);
  out.n_utterances = entries.size();

  if (opts.pool_speakers > 0) {
    std::filesystem::create_directories(out_dir / "pool" / "wav");
    std::vector<Job> pool_jobs;
    for (int s = 0; s < opts.pool_speakers; ++s) {
      const std::string spk = "pool" + Pad(s, 4);
      RandomStream voice_rng(DeriveSeed(opts.seed, "voice:" + spk));
      const SpeakerVoice voice = RandomVoice(voice_rng);
      for (int k = 0; k < opts.pool_utts; ++k) {
        Job j;
        j.entry.id = spk + "_" + Pad(k, 2);
        j.entry.speaker_id = spk;
        j.entry.session_id = "pool";
        j.entry.emotion = "neutral";
        j.entry.path = out_dir / "pool" / "wav" / (j.entry.id + ".wav");
        j.seed = DeriveSeed(opts.seed, "utt:" + j.entry.id);
        j.duration = 1.5;
        j.voice = voice;
        j.profile = ProfileFor(Emotion::kNeutral);
        pool_jobs.push_back(std::move(j));
      }
    }
    RenderJobs(pool_jobs, opts.sample_rate, opts.jobs);
    out.pool_manifest = out_dir / "pool_manifest.jsonl";
    std::vector<ManifestEntry> pool_entries;
    for (const Job& j : pool_jobs) pool_entries.push_back(j.entry);
    SaveManifest(pool_entries, out.pool_manifest);
    out.n_pool_utterances = pool_entries.size();
  }
  return out;
}

}  // namespace voxanon
