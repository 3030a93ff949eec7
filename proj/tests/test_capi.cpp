#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "voxanon/voxanon.h"

namespace fs = std::filesystem;

namespace {

fs::path Scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "voxanon_capi_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(va_version()) == "0.1.0");
  CHECK(std::string(va_status_name(VA_ERR_IO)) == "i/o error");
}

TEST_CASE("null arguments are rejected with a message") {
  va_audio* audio = nullptr;
  CHECK(va_audio_read(nullptr, &audio) == VA_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(va_last_error()) > 0);
  CHECK(va_extract_f0(nullptr, 0, 0, nullptr) == VA_ERR_INVALID_ARGUMENT);
  CHECK(va_audio_length(nullptr) == 0);
  va_audio_free(nullptr);
  va_pool_free(nullptr);
  va_report_free(nullptr);
}

TEST_CASE("audio and pitch through the C interface") {
  const auto dir = Scratch("audio");
  std::vector<double> s(16000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.5 * std::sin(2.0 * M_PI * 200.0 * i / 16000.0);
  va_audio* a = nullptr;
  REQUIRE(va_audio_from_samples(s.data(), s.size(), 16000, &a) == VA_OK);
  REQUIRE(va_audio_write(a, (dir / "a.wav").c_str()) == VA_OK);
  va_audio* b = nullptr;
  REQUIRE(va_audio_read((dir / "a.wav").c_str(), &b) == VA_OK);
  CHECK(va_audio_length(b) == s.size());
  CHECK(va_audio_sample_rate(b) == 16000);
  CHECK(std::abs(va_audio_samples(b)[100] - s[100]) < 1e-4);

  va_f0* f0 = nullptr;
  REQUIRE(va_extract_f0(b, 0, 0, &f0) == VA_OK);
  CHECK(va_f0_length(f0) > 90);
  double hz = 0.0;
  int voiced = 0;
  REQUIRE(va_f0_frame(f0, 50, &hz, &voiced) == VA_OK);
  CHECK(voiced == 1);
  CHECK(std::abs(hz - 200.0) < 2.0);
  CHECK(va_f0_frame(f0, 1000, &hz, &voiced) == VA_ERR_INVALID_ARGUMENT);

  CHECK(va_audio_read((dir / "missing.wav").c_str(), &b) == VA_ERR_IO);
  va_f0_free(f0);
  va_audio_free(a);
  va_audio_free(b);
}

TEST_CASE("F0 transforms through the C interface") {
  const double hz[] = {100.0, 0.0, 150.0, 200.0};
  const int voiced[] = {1, 0, 1, 1};
  va_f0* t = nullptr;
  REQUIRE(va_f0_from_frames(hz, voiced, 4, 10.0, 60.0, 400.0, &t) == VA_OK);
  va_f0_stats src{};
  const va_f0* tracks[] = {t};
  REQUIRE(va_f0_stats_compute(tracks, 1, &src) == VA_OK);
  CHECK(src.n_frames == 3);
  const va_f0_stats tgt{std::log(180.0), src.sigma_log, 3};
  va_f0* lin = nullptr;
  REQUIRE(va_f0_linear_transform(t, &src, &tgt, &lin) == VA_OK);
  const va_f0* out[] = {lin};
  va_f0_stats got{};
  REQUIRE(va_f0_stats_compute(out, 1, &got) == VA_OK);
  CHECK(got.mu_log == doctest::Approx(tgt.mu_log).epsilon(1e-12));
  va_f0* warped = nullptr;
  REQUIRE(va_f0_warp(t, 1.1, &warped) == VA_OK);
  double v = 0.0;
  va_f0_frame(warped, 0, &v, nullptr);
  CHECK(v == doctest::Approx(150.0 + (100.0 - 150.0) * 1.1));

  const va_f0_stats flat{std::log(120.0), 0.0, 3};
  CHECK(va_f0_linear_transform(t, &flat, &tgt, &lin) == VA_ERR_VALIDATION);
  va_f0_free(t);
  va_f0_free(lin);
  va_f0_free(warped);
}

TEST_CASE("configuration keys and validation") {
  va_config* cfg = nullptr;
  REQUIRE(va_config_new(&cfg) == VA_OK);
  CHECK(va_config_set(cfg, "seed", "42") == VA_OK);
  CHECK(va_config_set(cfg, "scenario", "baseline, informed") == VA_OK);
  CHECK(va_config_set(cfg, "feature_set", "mfcc_functionals") == VA_OK);
  CHECK(va_config_set(cfg, "colour", "blue") == VA_ERR_INVALID_ARGUMENT);
  CHECK(va_config_set(cfg, "jobs", "0") == VA_ERR_INVALID_ARGUMENT);
  CHECK(va_config_set(cfg, "seed", "-1") == VA_ERR_INVALID_ARGUMENT);
  CHECK(va_config_set(cfg, "f0_linear", "maybe") == VA_ERR_INVALID_ARGUMENT);
  CHECK(va_config_set(cfg, "scenario", "oracle") == VA_ERR_VALIDATION);
  CHECK(va_config_set(cfg, "feature_set", "opensmile") == VA_ERR_VALIDATION);
  CHECK(va_config_set(cfg, "f0_warp", "true") == VA_OK);
  CHECK(va_config_validate(cfg) == VA_ERR_VALIDATION);
  CHECK(std::string(va_last_error()).find("linear") != std::string::npos);
  CHECK(va_config_set(cfg, "f0_linear", "yes") == VA_OK);
  CHECK(va_config_validate(cfg) == VA_OK);
  va_config_free(cfg);
}

TEST_CASE("degradation and WER helpers") {
  double pct = 0.0;
  char label[32];
  REQUIRE(va_relative_degradation(44.48, 37.92, 1, &pct, label, sizeof label) == VA_OK);
  CHECK(pct == doctest::Approx(14.748).epsilon(1e-4));
  CHECK(std::string(label) == "15% degradation");
  REQUIRE(va_relative_degradation(34.62, 38.97, 0, &pct, label, sizeof label) == VA_OK);
  CHECK(std::string(label) == "13% degradation");
  char small[4];
  REQUIRE(va_relative_degradation(44.48, 37.92, 1, &pct, small, sizeof small) == VA_OK);
  CHECK(std::string(small) == "15%");
  CHECK(va_relative_degradation(0.0, 1.0, 1, &pct, nullptr, 0) == VA_ERR_VALIDATION);

  va_wer w{};
  REQUIRE(va_wer_text("a b c", "a x c d", &w) == VA_OK);
  CHECK(w.substitutions == 1);
  CHECK(w.insertions == 1);
  CHECK(w.wer_percent == doctest::Approx(200.0 / 3.0));
  CHECK(va_wer_text("", "a", &w) == VA_ERR_VALIDATION);
}

TEST_CASE("corpus, pool, anonymization and report through the C interface") {
  const auto dir = Scratch("pipeline");
  va_synthetic_options o = va_synthetic_defaults();
  CHECK(o.n_speakers == 8);
  o.seed = 3;
  o.n_speakers = 4;
  o.n_sessions = 2;
  o.n_classes = 2;
  o.utts_per_cell = 2;
  o.pool_speakers = 8;
  size_t n = 0;
  REQUIRE(va_generate_synthetic((dir / "corpus").c_str(), &o, &n) == VA_OK);
  CHECK(n == 32);

  va_pool* pool = nullptr;
  size_t n_errors = 99;
  REQUIRE(va_pool_build((dir / "corpus" / "pool_manifest.jsonl").c_str(), 2,
                        (dir / "pool_errors.jsonl").c_str(), &pool, &n_errors) == VA_OK);
  CHECK(n_errors == 0);
  CHECK(va_pool_size(pool) == 8);
  REQUIRE(va_pool_save(pool, (dir / "pool.json").c_str()) == VA_OK);
  va_pool* loaded = nullptr;
  REQUIRE(va_pool_load((dir / "pool.json").c_str(), &loaded) == VA_OK);
  CHECK(va_pool_size(loaded) == 8);

  va_config* cfg = nullptr;
  va_config_new(&cfg);
  va_config_set(cfg, "n_far", "6");
  va_config_set(cfg, "n_sel", "3");
  va_config_set(cfg, "f0_linear", "true");
  REQUIRE(va_anonymize((dir / "corpus" / "manifest.jsonl").c_str(), loaded, cfg,
                       (dir / "anon").c_str(), &n_errors) == VA_OK);
  CHECK(n_errors == 0);
  CHECK(fs::exists(dir / "anon" / "anonymization_log.jsonl"));

  va_config_set(cfg, "scenario", "baseline,informed");
  va_config_set(cfg, "eer", "false");
  va_report* rep = nullptr;
  REQUIRE(va_run_experiment((dir / "corpus" / "manifest.jsonl").c_str(), loaded, cfg,
                            (dir / "run").c_str(), &rep) == VA_OK);
  double uar = 0.0;
  CHECK(va_report_uar(rep, "baseline", &uar) == VA_OK);
  CHECK(uar > 0.0);
  CHECK(uar <= 1.0);
  CHECK(va_report_uar(rep, "ignorant", &uar) == VA_ERR_VALIDATION);
  REQUIRE(va_report_emit(rep, (dir / "run").c_str(), "json,text") == VA_OK);
  CHECK(va_report_emit(rep, (dir / "run").c_str(), "yaml") == VA_ERR_VALIDATION);
  va_report* again = nullptr;
  REQUIRE(va_report_load((dir / "run" / "report.json").c_str(), &again) == VA_OK);
  CHECK(std::string(va_report_json(again)) == std::string(va_report_json(rep)));
  CHECK(va_report_load((dir / "nothing.json").c_str(), &again) == VA_ERR_IO);

  va_report_free(rep);
  va_report_free(again);
  va_config_free(cfg);
  va_pool_free(pool);
  va_pool_free(loaded);
}
