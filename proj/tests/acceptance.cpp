// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "voxanon/common.hpp"
#include "voxanon/eval.hpp"
#include "voxanon/f0_transform.hpp"
#include "voxanon/resynth.hpp"
#include "voxanon/signal.hpp"
#include "voxanon/speaker_space.hpp"
#include "voxanon/synthetic_corpus.hpp"

namespace fs = std::filesystem;
using namespace voxanon;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Voiced linear-Hz mean and population std.
void HzMoments(const F0Track& t, double* mean, double* sd) {
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.voiced[i]) s += t.f0_hz[i], n += 1.0;
  }
  *mean = s / n;
  double v = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.voiced[i]) v += (t.f0_hz[i] - *mean) * (t.f0_hz[i] - *mean);
  }
  *sd = std::sqrt(v / n);
}

F0Track RandomTrack(RandomStream& rng, std::size_t n, double centre_hz, double spread) {
  F0Track t;
  t.fmin = 20.0;
  t.fmax = 2000.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool v = rng.Uniform() < 0.7;
    t.voiced.push_back(v);
    t.f0_hz.push_back(v ? centre_hz * std::exp(spread * rng.Normal()) : 0.0);
  }
  // At least two distinct voiced values.
  t.voiced[0] = t.voiced[1] = true;
  t.f0_hz[0] = centre_hz;
  t.f0_hz[1] = centre_hz * 1.1;
  return t;
}

Outcome LogLinearExactness() {
  RandomStream rng(101);
  F0Track track;
  track.fmin = 20.0;
  track.fmax = 2000.0;
  for (int i = 0; i < 10000; ++i) {
    track.voiced.push_back(true);
    track.f0_hz.push_back(140.0 * std::exp(0.2 * rng.Normal()));
  }
  const std::vector<F0Track> one{track};
  const SpeakerF0Stats src = ComputeSpeakerStats(one);
  const SpeakerF0Stats tgt{std::log(205.0), 0.12, 0};
  const auto t0 = Clock::now();
  LinearTransformOptions opts;
  opts.clamp = false;
  const F0Track out = LinearTransform(track, src, tgt, opts);
  const double elapsed = Seconds(t0);

  double worst = 0.0;
  for (std::size_t i = 0; i < track.size(); ++i) {
    const double want = tgt.mu_log + tgt.sigma_log / src.sigma_log *
                                          (std::log(track.f0_hz[i]) - src.mu_log);
    worst = std::max(worst, std::abs(std::log(out.f0_hz[i]) - want));
  }
  const std::vector<F0Track> mapped{out};
  const SpeakerF0Stats got = ComputeSpeakerStats(mapped);
  const double mu_err = std::abs(got.mu_log - tgt.mu_log);
  const double sd_err = std::abs(got.sigma_log - tgt.sigma_log);
  std::ostringstream d;
  d << "10000 voiced frames, max |ln y - ref| " << worst << ", |mu err| " << mu_err
    << ", |sigma err| " << sd_err << ", " << elapsed << " s";
  return {worst <= 1e-9 && mu_err <= 1e-9 && sd_err <= 1e-9 && elapsed < 1.0, d.str()};
}

Outcome WarpMoments() {
  RandomStream rng(202);
  const WarpConfig cfg;
  double worst_mean = 0.0, worst_sd = 0.0;
  bool alpha_ok = true, clamp_ok = true;
  const auto t0 = Clock::now();
  for (int u = 0; u < 1000; ++u) {
    const F0Track track = RandomTrack(rng, 50 + rng.Below(400), rng.Uniform(90.0, 260.0), 0.15);
    RandomStream draw(rng.NextU64());
    const WarpResult r = RandomWarp(track, cfg, draw);
    alpha_ok = alpha_ok && r.alpha >= cfg.alpha_min && r.alpha <= cfg.alpha_max;
    // Moments are checked on the unclamped warp with the logged alpha; the
    // clamped output must be its clip to [fmin, fmax].
    const F0Track raw = ApplyWarp(track, r.alpha, false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double clipped = track.voiced[i] ? std::clamp(raw.f0_hz[i], track.fmin, track.fmax)
                                             : raw.f0_hz[i];
      clamp_ok = clamp_ok && r.track.f0_hz[i] == clipped && r.track.voiced[i] == track.voiced[i];
    }
    double m0, s0, m1, s1;
    HzMoments(track, &m0, &s0);
    HzMoments(raw, &m1, &s1);
    worst_mean = std::max(worst_mean, std::abs(m1 - m0) / m0);
    worst_sd = std::max(worst_sd, std::abs(s1 - r.alpha * s0) / s0);
  }
  const double elapsed = Seconds(t0);
  std::ostringstream d;
  d << "1000 utterances, max rel mean err " << worst_mean << ", max rel std err " << worst_sd
    << ", " << elapsed << " s";
  return {worst_mean <= 1e-9 && worst_sd <= 1e-9 && alpha_ok && clamp_ok && elapsed < 5.0,
          d.str()};
}

Outcome PseudoSpeakerOracle() {
  RandomStream rng(303);
  int mismatches = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const EmbeddingPool pool = oracle::RandomPool(rng, 10, 8);
    const SpeakerEmbedding src{"source", oracle::RandomUnit(rng, 8)};
    const std::uint64_t seed = rng.NextU64();
    const PseudoSpeaker got = DerivePseudoSpeaker(src, pool, {6, 3}, seed);
    const PseudoSpeaker want = oracle::BruteForcePseudo(src, pool, 6, 3, seed);
    bool same = got.selected_ids == want.selected_ids &&
                got.embedding.size() == want.embedding.size() &&
                std::abs(got.f0_stats.mu_log - want.f0_stats.mu_log) <= 1e-12 &&
                std::abs(got.f0_stats.sigma_log - want.f0_stats.sigma_log) <= 1e-12;
    for (std::size_t k = 0; same && k < got.embedding.size(); ++k) {
      same = std::abs(got.embedding[k] - want.embedding[k]) <= 1e-12;
    }
    if (!same) ++mismatches;
  }
  return {mismatches == 0,
          "100 pools of 10 speakers, n_far 6, n_sel 3, " + std::to_string(mismatches) +
              " mismatches"};
}

Outcome MetricOracles() {
  RandomStream rng(404);
  int uar_bad = 0, wer_bad = 0, eer_bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng.Below(5);
    ConfusionMatrix cm(n);
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      std::uint64_t row = 0, diag = 0;
      for (std::size_t p = 0; p < n; ++p) {
        const std::uint64_t c = rng.Below(25) + (t == p ? 1 : 0);
        cm.Add(t, p, c);
        row += c;
        if (t == p) diag = c;
      }
      sum += static_cast<double>(diag) / static_cast<double>(row);
    }
    if (std::abs(Uar(cm) - sum / static_cast<double>(n)) > 1e-12) ++uar_bad;
  }
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::string> ref(1 + rng.Below(8)), hyp(rng.Below(9));
    for (auto& w : ref) w = vocab[rng.Below(vocab.size())];
    for (auto& w : hyp) w = vocab[rng.Below(vocab.size())];
    const WerResult r = Wer(ref, hyp);
    if (r.errors() != oracle::BruteForceEdits(ref, hyp, 0, 0) || r.n_ref != ref.size()) ++wer_bad;
  }
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> tgt(1 + rng.Below(40)), non(1 + rng.Below(40));
    const bool coarse = rep % 4 == 0;
    for (double& s : tgt) s = coarse ? std::round(5 * rng.Uniform() + 1) : rng.Normal() + 1.0;
    for (double& s : non) s = coarse ? std::round(5 * rng.Uniform()) : rng.Normal();
    if (std::abs(Eer(tgt, non) - oracle::BruteForceEer(tgt, non)) > 1e-12) ++eer_bad;
  }
  std::ostringstream d;
  d << "UAR " << uar_bad << "/1000, WER " << wer_bad << "/200, EER " << eer_bad
    << "/100 mismatches";
  return {uar_bad + wer_bad + eer_bad == 0, d.str()};
}

Outcome SynthesisFidelity() {
  RandomStream rng(505);
  std::vector<double> rel;
  const WarpConfig warp;
  for (int u = 0; u < 50; ++u) {
    const SpeakerVoice voice = RandomVoice(rng);
    const Emotion e = GenerationClass(static_cast<int>(rng.Below(4)));
    const AudioBuffer src = RenderUtterance(voice, ProfileFor(e), rng.NextU64(), 2.0, 16000);
    const F0Track f0 = ExtractF0(src);
    const std::vector<F0Track> one{f0};
    const SpeakerF0Stats src_stats = ComputeSpeakerStats(one);
    PseudoSpeaker pseudo;
    pseudo.seed = rng.NextU64();
    pseudo.selected_ids = {"a" + std::to_string(u), "b" + std::to_string(u)};
    pseudo.f0_stats = {std::log(rng.Uniform(110.0, 230.0)), rng.Uniform(0.08, 0.2), 0};
    LinearTransformOptions lt;
    lt.unit_ratio_if_degenerate = true;
    const F0Track mapped = LinearTransform(f0, src_stats, pseudo.f0_stats, lt);
    RandomStream draw(rng.NextU64());
    const F0Track target = RandomWarp(mapped, warp, draw).track;
    const AudioBuffer out = Synthesize(src, target, pseudo, SynthConfig{}, rng.NextU64());
    const F0Track got = ExtractF0(out);
    for (std::size_t t = 0; t < std::min(target.size(), got.size()); ++t) {
      if (target.voiced[t] && got.voiced[t]) {
        rel.push_back(std::abs(got.f0_hz[t] - target.f0_hz[t]) / target.f0_hz[t]);
      }
    }
  }
  if (rel.empty()) return {false, "no frames voiced in both tracks"};
  std::nth_element(rel.begin(), rel.begin() + rel.size() / 2, rel.end());
  const double median = rel[rel.size() / 2];
  std::ostringstream d;
  d << "50 utterances, " << rel.size() << " frames, median relative F0 error "
    << 100.0 * median << "%";
  return {median <= 0.05, d.str()};
}

int RunCli(const std::string& cli, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct EndToEnd {
  bool ran = false;
  std::string error;
  fs::path run_a;
  fs::path corpus;
  fs::path pool;
};

Outcome EndToEndCheck(const std::string& cli, const fs::path& work, EndToEnd* state) {
  fs::remove_all(work);
  fs::create_directories(work);
  state->corpus = work / "corpus";
  state->pool = work / "pool.json";
  state->run_a = work / "run_jobs2";
  const auto t0 = Clock::now();
  if (RunCli(cli, "gen-synthetic --seed 11 --pool-speakers 240 --out-dir \"" +
                      state->corpus.string() + "\" --jobs 2",
             work / "gen.log") != 0) {
    return {false, "gen-synthetic failed, see gen.log"};
  }
  if (RunCli(cli, "build-pool --manifest \"" + (state->corpus / "pool_manifest.jsonl").string() +
                      "\" --pool \"" + state->pool.string() + "\" --jobs 2",
             work / "pool.log") != 0) {
    return {false, "build-pool failed, see pool.log"};
  }
  if (RunCli(cli, "run-experiment --seed 11 --f0-linear --f0-warp --jobs 2 --manifest \"" +
                      (state->corpus / "manifest.jsonl").string() + "\" --pool \"" +
                      state->pool.string() + "\" --out-dir \"" + state->run_a.string() + "\"",
             work / "run_jobs2.log") != 0) {
    return {false, "run-experiment failed, see run_jobs2.log"};
  }
  const double elapsed = Seconds(t0);
  state->ran = true;

  const auto rep = nlohmann::json::parse(Slurp(state->run_a / "report.json"));
  double baseline = -1.0, ignorant = -1.0, informed = -1.0;
  for (const auto& s : rep.at("scenarios")) {
    const std::string name = s.at("scenario").get<std::string>();
    const double uar = s.at("uar").get<double>();
    if (name == "baseline") baseline = uar;
    if (name == "ignorant") ignorant = uar;
    if (name == "informed") informed = uar;
  }
  const std::size_t n_utt = rep.at("n_utterances").get<std::size_t>();
  const std::size_t pool_size = rep.at("config").at("pool").at("size").get<std::size_t>();
  const auto& eer = rep.at("eer");
  const double eer_o = eer.at("original_percent").get<double>() / 100.0;
  const double eer_a = eer.at("anonymized_percent").get<double>() / 100.0;
  std::ostringstream d;
  d << n_utt << " utterances, pool " << pool_size << ", UAR baseline " << 100 * baseline
    << "% ignorant " << 100 * ignorant << "% informed " << 100 * informed << "%, EER original "
    << 100 * eer_o << "% anonymized " << 100 * eer_a << "%, " << elapsed << " s";
  const bool pass = n_utt == 800 && pool_size >= 200 && baseline >= 0.80 &&
                    ignorant >= 0.0 && informed >= 0.0 && ignorant <= informed &&
                    eer_a >= eer_o && elapsed <= 600.0;
  return {pass, d.str()};
}

Outcome DegradationFixtures() {
  const double a = RelativeDegradation(44.48, 37.92, true);
  const double b = RelativeDegradation(34.62, 38.97, false);
  const std::string la = DegradationLabel(a);
  const std::string lb = DegradationLabel(b);
  return {la == "15% degradation" && lb == "13% degradation",
          "UAR 44.48 -> 37.92: \"" + la + "\", WER 34.62 -> 38.97: \"" + lb + "\""};
}

Outcome Determinism(const std::string& cli, const fs::path& work, const EndToEnd& state) {
  if (!state.ran) return {false, "end-to-end run unavailable"};
  const fs::path run_b = work / "run_jobs1";
  if (RunCli(cli, "run-experiment --seed 11 --f0-linear --f0-warp --jobs 1 --manifest \"" +
                      (state.corpus / "manifest.jsonl").string() + "\" --pool \"" +
                      state.pool.string() + "\" --out-dir \"" + run_b.string() + "\"",
             work / "run_jobs1.log") != 0) {
    return {false, "second run-experiment failed, see run_jobs1.log"};
  }
  std::vector<std::string> differing;
  for (const char* rel : {"report.json", "report.txt", "report.csv",
                          "anonymized/anonymization_log.jsonl"}) {
    const std::string x = Slurp(state.run_a / rel);
    const std::string y = Slurp(run_b / rel);
    if (x.empty() || x != y) differing.push_back(rel);
  }
  std::string detail = "--jobs 2 vs --jobs 1: ";
  if (differing.empty()) {
    detail += "report and anonymization log byte-identical";
  } else {
    for (const auto& f : differing) detail += f + " ";
    detail += "differ";
  }
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxanon acceptance checks"};
  std::string cli;
  std::string work = (fs::temp_directory_path() / "voxanon_acceptance").string();
  app.add_option("--cli", cli, "path to the voxanon executable")->required();
  app.add_option("--work-dir", work, "scratch directory for the end-to-end runs");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
  };

  EndToEnd state;
  report(1, "log-linear F0 map", LogLinearExactness);
  report(2, "random F0 warp", WarpMoments);
  report(3, "pseudo-speaker selection", PseudoSpeakerOracle);
  report(4, "metric oracles", MetricOracles);
  report(5, "synthesizer F0 fidelity", SynthesisFidelity);
  report(6, "end-to-end synthetic corpus", [&] { return EndToEndCheck(cli, work, &state); });
  report(7, "relative degradation labels", DegradationFixtures);
  report(8, "determinism across job counts", [&] { return Determinism(cli, work, state); });
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
