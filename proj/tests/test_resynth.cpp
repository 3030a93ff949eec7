#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "doctest.h"
#include "test_util.hpp"
#include "voxanon/resynth.hpp"
#include "voxanon/synthetic_corpus.hpp"

using namespace voxanon;

namespace {

std::vector<double> Ar2(double a1, double a2, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.01 * rng.Normal();
    if (i >= 1) v += a1 * x[i - 1];
    if (i >= 2) v += a2 * x[i - 2];
    x[i] = v;
  }
  return x;
}

PseudoSpeaker FakePseudo(std::uint64_t seed) {
  PseudoSpeaker ps;
  ps.seed = seed;
  ps.selected_ids = {"p1", "p7"};
  ps.f0_stats = {std::log(180.0), 0.15, 100};
  return ps;
}

}  // namespace

TEST_CASE("LPC recovers a second-order autoregression") {
  const auto x = Ar2(1.3, -0.6, 60000, 21);
  const LpcFrame f = LpcAnalyze(x, 2);
  REQUIRE(f.coeffs.size() == 2);
  CHECK(f.coeffs[0] == doctest::Approx(1.3).epsilon(0.02));
  CHECK(f.coeffs[1] == doctest::Approx(-0.6).epsilon(0.03));
  CHECK(f.gain == doctest::Approx(0.01).epsilon(0.05));
  CHECK_FALSE(f.silent);
}

TEST_CASE("Levinson recursion solves the normal equations") {
  RandomStream rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> frame(400);
    for (double& v : frame) v = rng.Uniform(-1.0, 1.0);
    const int p = 10;
    const LpcFrame f = LpcAnalyze(frame, p);
    Eigen::VectorXd r(p + 1);
    for (int lag = 0; lag <= p; ++lag) {
      double acc = 0.0;
      for (std::size_t n = lag; n < frame.size(); ++n) acc += frame[n] * frame[n - lag];
      r[lag] = acc;
    }
    r[0] += 1e-9;
    Eigen::MatrixXd toeplitz(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) toeplitz(i, j) = r[std::abs(i - j)];
    }
    const Eigen::VectorXd want = toeplitz.ldlt().solve(r.segment(1, p));
    for (int k = 0; k < p; ++k) CHECK(f.coeffs[k] == doctest::Approx(want[k]).epsilon(1e-8));
  }
}

TEST_CASE("silent frames are flagged") {
  const std::vector<double> zeros(400, 0.0);
  const LpcFrame f = LpcAnalyze(zeros, 18);
  CHECK(f.silent);
  CHECK(f.gain == 0.0);
  CHECK_THROWS_AS(LpcAnalyze(std::vector<double>(10, 1.0), 18), ValidationError);
}

TEST_CASE("poles and coefficients convert both ways") {
  const auto x = Ar2(1.3, -0.6, 4000, 3);
  const LpcFrame f = LpcAnalyze(std::vector<double>(x.begin(), x.begin() + 400), 12);
  const auto poles = LpcPoles(f.coeffs);
  REQUIRE(poles.size() == 12);
  const auto back = CoeffsFromPoles(poles);
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    CHECK(back[k] == doctest::Approx(f.coeffs[k]).epsilon(1e-8));
  }
  CHECK(IsStable(f.coeffs));
  CHECK_FALSE(IsStable(std::vector<double>{2.5, -1.0}));
}

TEST_CASE("McAdams warp raises pole angles and keeps radii") {
  const auto x = Ar2(1.3, -0.6, 4000, 5);
  const LpcFrame f = LpcAnalyze(std::vector<double>(x.begin(), x.begin() + 400), 2);
  const auto before = LpcPoles(f.coeffs);
  const double c = 0.8;
  const LpcFrame w = McAdamsWarp(f, c);
  const auto after = LpcPoles(w.coeffs);
  auto upper = [](const std::vector<std::complex<double>>& p) {
    return *std::max_element(p.begin(), p.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
  };
  const auto p0 = upper(before), p1 = upper(after);
  CHECK(std::abs(p1) == doctest::Approx(std::abs(p0)).epsilon(1e-9));
  CHECK(std::arg(p1) == doctest::Approx(std::pow(std::arg(p0), c)).epsilon(1e-9));
  CHECK(w.gain == f.gain);
  CHECK(IsStable(w.coeffs));

  const LpcFrame same = McAdamsWarp(f, 1.0);
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    CHECK(same.coeffs[k] == doctest::Approx(f.coeffs[k]).epsilon(1e-9));
  }
  LpcFrame unstable = f;
  unstable.coeffs = {2.5, -1.0};
  CHECK_THROWS(McAdamsWarp(unstable, 0.8));
}

TEST_CASE("McAdams coefficient is a deterministic function of the pseudo-speaker") {
  const SynthConfig cfg;
  const PseudoSpeaker a = FakePseudo(1);
  PseudoSpeaker b = a;
  b.selected_ids.push_back("p9");
  const double ca = McAdamsCoefficientFor(a, cfg);
  CHECK(ca == McAdamsCoefficientFor(a, cfg));
  CHECK(ca != McAdamsCoefficientFor(b, cfg));
  for (std::uint64_t s = 0; s < 500; ++s) {
    const double c = McAdamsCoefficientFor(FakePseudo(s), cfg);
    CHECK(c >= 0.75);
    CHECK(c <= 0.95);
  }
}

TEST_CASE("synthesis configuration is validated") {
  SynthConfig cfg;
  cfg.lpc_order = 6;
  CHECK_THROWS_AS(cfg.Validate(), ValidationError);
  cfg = SynthConfig{};
  cfg.mcadams_min = 0.9;
  cfg.mcadams_max = 1.1;
  CHECK_THROWS_AS(cfg.Validate(), ValidationError);
  cfg.mcadams_min = 1.05;
  cfg.mcadams_max = 1.2;
  CHECK_NOTHROW(cfg.Validate());
}

TEST_CASE("synthesis preserves length, limits peaks and is deterministic") {
  RandomStream rng(40);
  const SpeakerVoice voice = RandomVoice(rng);
  const AudioBuffer src = RenderUtterance(voice, ProfileFor(Emotion::kAnger), 9, 2.0, 16000);
  const F0Track f0 = ExtractF0(src);
  SynthTrace trace;
  const AudioBuffer a = Synthesize(src, f0, FakePseudo(3), SynthConfig{}, 77, &trace);
  const AudioBuffer b = Synthesize(src, f0, FakePseudo(3), SynthConfig{}, 77);
  CHECK(a.size() == src.size());
  CHECK(a.sample_rate == src.sample_rate);
  CHECK(a.samples == b.samples);
  double peak = 0.0;
  for (double s : a.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak <= 0.95 + 1e-12);
  CHECK(peak > 0.0);
  CHECK(trace.n_frames == f0.size());
  CHECK(trace.mcadams_coefficient == McAdamsCoefficientFor(FakePseudo(3), SynthConfig{}));

  F0Track short_track = f0;
  short_track.f0_hz.pop_back();
  short_track.voiced.pop_back();
  CHECK_THROWS(Synthesize(src, short_track, FakePseudo(3), SynthConfig{}, 77));
}

TEST_CASE("synthesized pitch follows the target track") {
  RandomStream rng(41);
  const SpeakerVoice voice = RandomVoice(rng);
  const AudioBuffer src = RenderUtterance(voice, ProfileFor(Emotion::kNeutral), 4, 2.0, 16000);
  F0Track target = ExtractF0(src);
  for (std::size_t t = 0; t < target.size(); ++t) {
    if (target.voiced[t]) target.f0_hz[t] = std::min(target.f0_hz[t] * 1.25, 390.0);
  }
  const AudioBuffer out = Synthesize(src, target, FakePseudo(5), SynthConfig{}, 1);
  const F0Track got = ExtractF0(out);
  std::vector<double> rel;
  for (std::size_t t = 0; t < target.size(); ++t) {
    if (target.voiced[t] && got.voiced[t]) {
      rel.push_back(std::abs(got.f0_hz[t] - target.f0_hz[t]) / target.f0_hz[t]);
    }
  }
  REQUIRE(rel.size() > 20);
  std::nth_element(rel.begin(), rel.begin() + rel.size() / 2, rel.end());
  CHECK(rel[rel.size() / 2] < 0.05);
}
