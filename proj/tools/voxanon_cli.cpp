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

// voxanon command-line front end. Talks to the toolkit only through the C
// interface in voxanon/voxanon.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "voxanon/voxanon.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::optional<std::uint64_t> seed;
  std::string pool;
  std::vector<std::string> scenarios;
  std::optional<bool> f0_linear;
  std::optional<bool> f0_warp;
  std::string feature_set;
  std::string out_dir;
  int jobs = 1;
  std::string manifest;

  // run-experiment
  std::string hyp_original;
  std::string hyp_anonymized;
  bool no_eer = false;
  std::string formats = "json,text,csv";
  std::string pseudo_scope;

  // score-wer
  std::string ref;
  std::string hyp;

  // gen-synthetic
  int speakers = 8;
  int sessions = 5;
  int classes = 4;
  int utts_per_cell = 5;
  int pool_speakers = 0;
  int pool_utts = 2;

  // report
  std::string report_in;
};

// Status from the library, with the message already printed.
class Failure {
 public:
  explicit Failure(va_status s) : status(s) {}
  va_status status;
};

void Check(va_status s, const char* what) {
  if (s == VA_OK) return;
  std::cerr << "voxanon: " << what << ": " << va_last_error() << " ("
            << va_status_name(s) << ")\n";
  throw Failure(s);
}

int ExitCodeFor(va_status s) {
  return (s == VA_ERR_VALIDATION || s == VA_ERR_INVALID_ARGUMENT) ? kExitValidation
                                                                 : kExitRuntime;
}

void WriteErrorReport(const std::string& out_dir, const std::string& command,
                      const std::string& message, const nlohmann::ordered_json& extra = {}) {
  if (out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  nlohmann::ordered_json j;
  j["command"] = command;
  j["error"] = message;
  if (!extra.is_null()) j["details"] = extra;
  std::ofstream out(fs::path(out_dir) / "error_report.json");
  if (out) out << j.dump(2) << '\n';
}

struct ConfigHandle {
  va_config* cfg = nullptr;
  ~ConfigHandle() { va_config_free(cfg); }
};

struct PoolHandle {
  va_pool* pool = nullptr;
  ~PoolHandle() { va_pool_free(pool); }
};

void Set(va_config* cfg, const char* key, const std::string& value) {
  Check(va_config_set(cfg, key, value.c_str()), key);
}

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

void BuildConfig(const Options& o, va_config* cfg) {
  if (o.seed) Set(cfg, "seed", std::to_string(*o.seed));
  if (!o.scenarios.empty()) Set(cfg, "scenario", Join(o.scenarios));
  if (o.f0_linear) Set(cfg, "f0_linear", *o.f0_linear ? "true" : "false");
  if (o.f0_warp) Set(cfg, "f0_warp", *o.f0_warp ? "true" : "false");
  if (!o.feature_set.empty()) Set(cfg, "feature_set", o.feature_set);
  if (!o.pseudo_scope.empty()) Set(cfg, "pseudo_scope", o.pseudo_scope);
  Set(cfg, "jobs", std::to_string(o.jobs));
  if (!o.hyp_original.empty()) Set(cfg, "hyp_original", o.hyp_original);
  if (!o.hyp_anonymized.empty()) Set(cfg, "hyp_anonymized", o.hyp_anonymized);
  if (o.no_eer) Set(cfg, "eer", "false");
  Check(va_config_validate(cfg), "configuration");
}

void Require(const std::string& value, const char* flag) {
  if (value.empty()) {
    std::cerr << "voxanon: " << flag << " is required\n";
    throw Failure(VA_ERR_INVALID_ARGUMENT);
  }
}

int CmdBuildPool(const Options& o) {
  Require(o.manifest, "--manifest");
  Require(o.pool, "--pool");
  const fs::path errors = fs::path(o.pool).replace_extension(".errors.jsonl");
  PoolHandle h;
  size_t n_errors = 0;
  Check(va_pool_build(o.manifest.c_str(), o.jobs, errors.c_str(), &h.pool, &n_errors),
        "build-pool");
  Check(va_pool_save(h.pool, o.pool.c_str()), "saving pool");
  std::cout << "pool: " << va_pool_size(h.pool) << " speakers -> " << o.pool << '\n';
  if (n_errors > 0) {
    std::cerr << "voxanon: " << n_errors << " speakers failed; see " << errors.string() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int CmdAnonymize(const Options& o) {
  Require(o.manifest, "--manifest");
  Require(o.pool, "--pool");
  Require(o.out_dir, "--out-dir");
  ConfigHandle c;
  Check(va_config_new(&c.cfg), "config");
  BuildConfig(o, c.cfg);
  PoolHandle p;
  Check(va_pool_load(o.pool.c_str(), &p.pool), "loading pool");
  size_t n_errors = 0;
  Check(va_anonymize(o.manifest.c_str(), p.pool, c.cfg, o.out_dir.c_str(), &n_errors),
        "anonymize");
  std::cout << "anonymized corpus -> " << o.out_dir << '\n';
  if (n_errors > 0) {
    std::cerr << "voxanon: " << n_errors << " utterances failed; see "
              << (fs::path(o.out_dir) / "errors.jsonl").string() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int CmdRunExperiment(const Options& o) {
  Require(o.manifest, "--manifest");
  Require(o.pool, "--pool");
  Require(o.out_dir, "--out-dir");
  ConfigHandle c;
  Check(va_config_new(&c.cfg), "config");
  BuildConfig(o, c.cfg);
  PoolHandle p;
  Check(va_pool_load(o.pool.c_str(), &p.pool), "loading pool");
  va_report* report = nullptr;
  Check(va_run_experiment(o.manifest.c_str(), p.pool, c.cfg, o.out_dir.c_str(), &report),
        "run-experiment");
  const va_status emitted = va_report_emit(report, o.out_dir.c_str(), o.formats.c_str());
  const auto json = nlohmann::ordered_json::parse(va_report_json(report));
  va_report_free(report);
  Check(emitted, "writing report");
  for (const auto& s : json.at("scenarios")) {
    std::printf("%-9s UAR %6.2f%%  [%.2f, %.2f]\n", s.at("scenario").get<std::string>().c_str(),
                s.at("uar_percent").get<double>(), s.at("ci").at("low_percent").get<double>(),
                s.at("ci").at("high_percent").get<double>());
  }
  if (!json.at("eer").is_null()) {
    std::printf("EER original %.2f%%, anonymized %.2f%%\n",
                json.at("eer").at("original_percent").get<double>(),
                json.at("eer").at("anonymized_percent").get<double>());
  }
  std::cout << "report -> " << o.out_dir << '\n';
  if (!json.at("anonymization_errors").empty()) {
    std::cerr << "voxanon: " << json.at("anonymization_errors").size()
              << " utterances failed anonymization; see the report\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int CmdScoreWer(const Options& o) {
  Require(o.ref, "--ref");
  Require(o.hyp, "--hyp");
  va_wer w{};
  Check(va_score_wer(o.ref.c_str(), o.hyp.c_str(), &w), "score-wer");
  std::printf("WER %.2f%% (S %zu, D %zu, I %zu, N %zu, missing hypotheses %zu)\n",
              w.wer_percent, w.substitutions, w.deletions, w.insertions, w.n_ref_words,
              w.n_missing_hypotheses);
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    nlohmann::ordered_json j{{"wer_percent", w.wer_percent},
                             {"substitutions", w.substitutions},
                             {"deletions", w.deletions},
                             {"insertions", w.insertions},
                             {"n_ref_words", w.n_ref_words},
                             {"n_missing_hypotheses", w.n_missing_hypotheses}};
    std::ofstream out(fs::path(o.out_dir) / "wer.json");
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

int CmdGenSynthetic(const Options& o) {
  Require(o.out_dir, "--out-dir");
  va_synthetic_options s = va_synthetic_defaults();
  if (o.seed) s.seed = *o.seed;
  s.n_speakers = o.speakers;
  s.n_sessions = o.sessions;
  s.n_classes = o.classes;
  s.utts_per_cell = o.utts_per_cell;
  s.pool_speakers = o.pool_speakers;
  s.pool_utts = o.pool_utts;
  s.jobs = o.jobs;
  size_t n = 0;
  Check(va_generate_synthetic(o.out_dir.c_str(), &s, &n), "gen-synthetic");
  std::cout << n << " utterances -> " << (fs::path(o.out_dir) / "manifest.jsonl").string()
            << '\n';
  return kExitOk;
}

int CmdReport(const Options& o) {
  Require(o.report_in, "--in");
  const std::string out_dir =
      o.out_dir.empty() ? fs::path(o.report_in).parent_path().string() : o.out_dir;
  va_report* report = nullptr;
  Check(va_report_load(o.report_in.c_str(), &report), "loading report");
  const va_status s = va_report_emit(report, out_dir.empty() ? "." : out_dir.c_str(),
                                     o.formats.c_str());
  va_report_free(report);
  Check(s, "writing report");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxanon: speaker anonymization and emotion-preservation evaluation"};
  app.set_version_flag("--version", va_version());
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value config file; flags override it");

  Options o;
  std::uint64_t seed = 0;
  bool f0_linear = false;
  bool f0_warp = false;
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--pool", o.pool, "speaker pool file (JSON)");
  app.add_option("--scenario", o.scenarios, "baseline, ignorant, informed (repeatable)")
      ->delimiter(',');
  auto* lin_opt = app.add_flag("--f0-linear{true}", f0_linear, "apply the log-linear F0 map");
  auto* warp_opt = app.add_flag("--f0-warp{true}", f0_warp, "apply the random F0 warp");
  app.add_option("--feature-set", o.feature_set, "egemaps_subset or mfcc_functionals");
  app.add_option("--out-dir", o.out_dir, "output directory");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--manifest", o.manifest, "corpus manifest (JSON Lines)");

  auto* build = app.add_subcommand("build-pool", "build a speaker pool from a manifest");
  auto* anon = app.add_subcommand("anonymize", "anonymize a corpus");
  auto* run = app.add_subcommand("run-experiment", "run attack scenarios and write a report");
  run->add_option("--hyp-original", o.hyp_original, "ASR hypotheses for original speech");
  run->add_option("--hyp-anonymized", o.hyp_anonymized,
                  "ASR hypotheses for anonymized speech");
  run->add_flag("--no-eer", o.no_eer, "skip speaker verification trials");
  run->add_option("--formats", o.formats, "comma list of json, text, csv");
  for (auto* sub : {anon, run}) {
    sub->add_option("--pseudo-scope", o.pseudo_scope, "per_speaker or per_utterance");
  }
  auto* wer = app.add_subcommand("score-wer", "score hypotheses against references");
  wer->add_option("--ref", o.ref, "reference transcripts (id<TAB>text)");
  wer->add_option("--hyp", o.hyp, "hypothesis transcripts (id<TAB>text)");
  auto* gen = app.add_subcommand("gen-synthetic", "generate the synthetic emotion corpus");
  gen->add_option("--speakers", o.speakers)->check(CLI::PositiveNumber);
  gen->add_option("--sessions", o.sessions)->check(CLI::PositiveNumber);
  gen->add_option("--classes", o.classes)->check(CLI::Range(1, 5));
  gen->add_option("--utts-per-cell", o.utts_per_cell)->check(CLI::PositiveNumber);
  gen->add_option("--pool-speakers", o.pool_speakers)->check(CLI::NonNegativeNumber);
  gen->add_option("--pool-utts", o.pool_utts)->check(CLI::PositiveNumber);
  auto* rep = app.add_subcommand("report", "re-render a report.json");
  rep->add_option("--in", o.report_in, "report.json to render");
  rep->add_option("--formats", o.formats, "comma list of json, text, csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  if (seed_opt->count() > 0) o.seed = seed;
  if (lin_opt->count() > 0) o.f0_linear = f0_linear;
  if (warp_opt->count() > 0) o.f0_warp = f0_warp;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (build->parsed()) return CmdBuildPool(o);
    if (anon->parsed()) return CmdAnonymize(o);
    if (run->parsed()) return CmdRunExperiment(o);
    if (wer->parsed()) return CmdScoreWer(o);
    if (gen->parsed()) return CmdGenSynthetic(o);
    if (rep->parsed()) return CmdReport(o);
  } catch (const Failure& f) {
    const int code = ExitCodeFor(f.status);
    if (code == kExitRuntime) WriteErrorReport(o.out_dir, command, va_last_error());
    return code;
  } catch (const std::exception& e) {
    std::cerr << "voxanon: " << e.what() << '\n';
    WriteErrorReport(o.out_dir, command, e.what());
    return kExitRuntime;
  }
  return kExitValidation;
}
