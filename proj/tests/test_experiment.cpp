#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "voxanon/anonymize.hpp"
#include "voxanon/experiment.hpp"
#include "voxanon/report.hpp"
#include "voxanon/synthetic_corpus.hpp"

using namespace voxanon;
namespace fs = std::filesystem;

namespace {

std::string Bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Features whose first column is the label; the second marks the source.
struct Toy {
  std::vector<LabeledEntry> entries;
  std::vector<int> labels;
  Eigen::MatrixXd original;
  Eigen::MatrixXd anonymized;
};

Toy MakeToy() {
  Toy t;
  const Emotion classes[] = {Emotion::kNeutral, Emotion::kAnger, Emotion::kSadness};
  for (int s = 0; s < 3; ++s) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 2; ++k) {
        ManifestEntry e;
        e.id = "u" + std::to_string(s) + std::to_string(c) + std::to_string(k);
        e.speaker_id = "spk" + std::to_string(s);
        e.session_id = "ses" + std::to_string(s);
        t.entries.push_back({e, classes[c]});
        t.labels.push_back(c);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(t.labels.size());
  t.original = Eigen::MatrixXd::Zero(n, 2);
  t.anonymized = Eigen::MatrixXd::Ones(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.original(i, 0) = t.labels[i];
    t.anonymized(i, 0) = t.labels[i];
  }
  return t;
}

// Predicts the label column and records which source it was given.
struct SpyClassifier {
  std::vector<double> train_marks;
  std::vector<double> test_marks;

  Classifier Make() {
    return [this](const Eigen::MatrixXd& tx, std::span<const int>, const Eigen::MatrixXd& sx) {
      for (Eigen::Index r = 0; r < tx.rows(); ++r) train_marks.push_back(tx(r, 1));
      for (Eigen::Index r = 0; r < sx.rows(); ++r) test_marks.push_back(sx(r, 1));
      std::vector<int> out;
      for (Eigen::Index r = 0; r < sx.rows(); ++r) out.push_back(static_cast<int>(sx(r, 0)));
      return out;
    };
  }
};

EmbeddingPool RandomPool(std::size_t size, std::uint64_t seed) {
  RandomStream rng(seed);
  EmbeddingPool pool;
  for (std::size_t i = 0; i < size; ++i) {
    std::vector<double> v(kEmbeddingDim);
    for (double& x : v) x = rng.Normal();
    NormalizeL2(v);
    pool.Add({"pool" + std::to_string(i), v,
              {std::log(rng.Uniform(100.0, 240.0)), rng.Uniform(0.05, 0.25), 500}});
  }
  return pool;
}

AnonymizationConfig SmallConfig(bool linear, bool warp) {
  AnonymizationConfig cfg;
  cfg.seed = 5;
  cfg.flags = {linear, warp};
  cfg.pseudo = {6, 3};
  return cfg;
}

fs::path TinyCorpus(const std::string& name, int classes = 2) {
  const auto dir = testutil::ScratchDir(name);
  SyntheticCorpusOptions o;
  o.seed = 21;
  o.n_speakers = 4;
  o.n_sessions = 2;
  o.n_classes = classes;
  o.utts_per_cell = 2;
  return GenerateSyntheticCorpus(dir, o).manifest;
}

}  // namespace

TEST_CASE("perfect classifier on original data gives UAR 1 and no degradation") {
  const Toy t = MakeToy();
  const auto folds = SplitLoso(t.entries);
  SpyClassifier spy;
  const ScenarioResult r =
      RunScenario(Scenario::kBaseline, t.original, nullptr, t.labels, 3, folds, spy.Make());
  CHECK(r.uar == 1.0);
  CHECK(r.folds.size() == 3);
  CHECK(r.confusion.Total() == t.labels.size());
  CHECK(RelativeDegradation(r.uar, r.uar, true) == 0.0);
  const Interval ci = WilsonInterval(1.0, static_cast<double>(t.labels.size()));
  CHECK(r.ci.lo == ci.lo);
  CHECK(r.ci.hi == ci.hi);
}

TEST_CASE("attack scenarios read the prescribed data sources") {
  const Toy t = MakeToy();
  const auto folds = SplitLoso(t.entries);
  struct Expect {
    Scenario s;
    double train;
    double test;
  };
  for (const Expect& e : {Expect{Scenario::kBaseline, 0.0, 0.0},
                          Expect{Scenario::kIgnorant, 0.0, 1.0},
                          Expect{Scenario::kInformed, 1.0, 1.0}}) {
    SpyClassifier spy;
    AccessAudit audit;
    RunScenario(e.s, t.original, &t.anonymized, t.labels, 3, folds, spy.Make(), &audit);
    CHECK(std::set<double>(spy.train_marks.begin(), spy.train_marks.end()) ==
          std::set<double>{e.train});
    CHECK(std::set<double>(spy.test_marks.begin(), spy.test_marks.end()) ==
          std::set<double>{e.test});
    for (const AccessRecord& rec : audit.records()) {
      CHECK(rec.scenario == e.s);
      const DataSource want = (rec.training ? e.train : e.test) == 0.0 ? DataSource::kOriginal
                                                                       : DataSource::kAnonymized;
      CHECK(rec.source == want);
    }
    CHECK(audit.records().size() == 2 * folds.size());
  }
  SpyClassifier spy;
  CHECK_THROWS_AS(RunScenario(Scenario::kIgnorant, t.original, nullptr, t.labels, 3, folds,
                              spy.Make()),
                  ValidationError);
}

TEST_CASE("scenario names parse") {
  CHECK(ParseScenario("informed") == Scenario::kInformed);
  CHECK(ToString(Scenario::kIgnorant) == "ignorant");
  CHECK_THROWS_AS(ParseScenario("lazy"), ValidationError);
}

TEST_CASE("trial lists pair within speakers and balance impostors") {
  const Toy t = MakeToy();
  std::vector<bool> usable(t.entries.size(), true);
  usable[0] = false;
  const auto trials = GenerateTrials(t.entries, usable, 3);
  std::size_t target = 0, nontarget = 0;
  std::set<std::pair<std::string, std::string>> seen;
  for (const Trial& tr : trials) {
    CHECK(tr.utterance_a != tr.utterance_b);
    CHECK(tr.utterance_a != t.entries[0].entry.id);
    CHECK(tr.utterance_b != t.entries[0].entry.id);
    CHECK(seen.insert({tr.utterance_a, tr.utterance_b}).second);
    (tr.same_speaker ? target : nontarget)++;
  }
  // Speakers have 5, 6 and 6 usable utterances.
  CHECK(target == 10 + 15 + 15);
  CHECK(nontarget == target);
  const auto again = GenerateTrials(t.entries, usable, 3);
  REQUIRE(again.size() == trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) CHECK(again[i].utterance_b == trials[i].utterance_b);
}

TEST_CASE("transcript files and corpus WER") {
  const auto dir = testutil::ScratchDir("transcripts");
  std::ofstream(dir / "ref.tsv") << "u1\tthe cat sat\nu2\tHello there\n\nu3\tone two\n";
  std::ofstream(dir / "hyp.tsv") << "u1\tthe hat sat\nu2\thello there\n";
  const auto ref = LoadTranscriptFile(dir / "ref.tsv");
  const auto hyp = LoadTranscriptFile(dir / "hyp.tsv");
  CHECK(ref.size() == 3);
  std::size_t missing = 0;
  const WerResult w = ScoreCorpusWer(ref, hyp, &missing);
  CHECK(missing == 1);
  CHECK(w.n_ref == 7);
  CHECK(w.errors() == 3);
  CHECK(w.wer_percent == doctest::Approx(100.0 * 3.0 / 7.0));
  std::ofstream(dir / "bad.tsv") << "no tab here\n";
  CHECK_THROWS_AS(LoadTranscriptFile(dir / "bad.tsv"), ValidationError);
  std::ofstream(dir / "dup.tsv") << "a\tx\na\ty\n";
  CHECK_THROWS_AS(LoadTranscriptFile(dir / "dup.tsv"), ValidationError);
}

TEST_CASE("summary rows reproduce the published relative differences") {
  const auto uar = SummaryRowToJson({"UAR", 44.48, 37.92, true});
  CHECK(uar["difference_percent"].get<double>() == doctest::Approx(14.75));
  CHECK(uar["label"] == "15% degradation");
  const auto wer = SummaryRowToJson({"WER", 34.62, 38.97, false});
  CHECK(wer["difference_percent"].get<double>() == doctest::Approx(12.56));
  CHECK(wer["label"] == "13% degradation");
}

TEST_CASE("text, CSV and JSON renderings carry the same numbers") {
  const Toy t = MakeToy();
  const auto folds = SplitLoso(t.entries);
  ExperimentReport rep;
  rep.config = {{"manifest", {{"file", "m.jsonl"}}},
                {"pool", {{"size", 3}}},
                {"seed", 1},
                {"feature_set", "egemaps_subset"},
                {"f0_linear", true},
                {"f0_warp", false}};
  rep.class_names = {"neutral", "anger", "sadness"};
  rep.n_utterances = t.labels.size();
  auto noisy = [](const Eigen::MatrixXd&, std::span<const int>, const Eigen::MatrixXd& sx) {
    std::vector<int> out;
    for (Eigen::Index r = 0; r < sx.rows(); ++r) out.push_back(r % 4 == 0 ? 0 : static_cast<int>(sx(r, 0)));
    return out;
  };
  for (Scenario s : {Scenario::kBaseline, Scenario::kInformed}) {
    rep.scenarios.push_back(
        RunScenario(s, t.original, &t.anonymized, t.labels, 3, folds,
                    s == Scenario::kBaseline ? SpyClassifier().Make() : Classifier(noisy)));
  }
  rep.scenarios[1].degradation_pct = RelativeDegradation(rep.scenarios[0].uar, rep.scenarios[1].uar, true);
  const auto j = ReportToJson(rep);
  CHECK_FALSE(j.contains("overlap_strata"));
  const std::string text = RenderText(j);
  const std::string csv = RenderCsv(j);
  for (const auto& s : j["scenarios"]) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", s["uar_percent"].get<double>());
    CHECK(text.find(buf) != std::string::npos);
    CHECK(csv.find(buf) != std::string::npos);
    std::snprintf(buf, sizeof buf, "%.2f", s["ci"]["low_percent"].get<double>());
    CHECK(text.find(buf) != std::string::npos);
    CHECK(csv.find(buf) != std::string::npos);
  }
  CHECK(j["scenarios"][1]["training_data"] == "anonymized");
  CHECK(j["scenarios"][1]["f0_linear"] == true);
  CHECK(j["scenarios"][0]["f0_linear"] == false);
  CHECK(j["summary"].size() == 1);

  rep.strata.push_back({"[0.0,0.1)", Scenario::kBaseline, 4, 0.75});
  const auto j2 = ReportToJson(rep);
  REQUIRE(j2.contains("overlap_strata"));
  CHECK(RenderText(j2).find("overlap ratio") != std::string::npos);

  const auto dir = testutil::ScratchDir("report_emit");
  const auto files = EmitReport(j, dir, ParseReportFormats("json,text,csv"));
  CHECK(files.size() == 3);
  CHECK(LoadReportJson(dir / "report.json") == j);
  CHECK_THROWS_AS(ParseReportFormats("json,pdf"), ValidationError);
}

TEST_CASE("anonymization validates its configuration") {
  AnonymizationConfig cfg = SmallConfig(false, true);
  CHECK_THROWS_AS(cfg.Validate(), ValidationError);
  CHECK_THROWS_AS(AnonymizeCorpus({}, RandomPool(8, 1), cfg, testutil::ScratchDir("anon_bad")),
                  ValidationError);
}

TEST_CASE("anonymization without F0 changes keeps the pitch track") {
  const auto manifest = TinyCorpus("anon_plain");
  auto entries = LoadManifest(manifest);
  entries.resize(4);
  const auto out = testutil::ScratchDir("anon_plain_out");
  const AnonymizationResult r = AnonymizeCorpus(entries, RandomPool(10, 2), SmallConfig(false, false), out);
  REQUIRE(r.errors.empty());
  REQUIRE(r.utterances.size() == 4);
  for (const auto& u : r.utterances) {
    CHECK(u.steps == std::vector<std::string>{"extract_f0", "synthesize"});
    CHECK_FALSE(u.alpha.has_value());
    CHECK(u.mcadams_coefficient >= 0.75);
    CHECK(u.mcadams_coefficient <= 0.95);
  }
  const F0Track before = ExtractF0(ReadWav(entries[0].path));
  const F0Track after = ExtractF0(ReadWav(r.entries[0].path));
  std::vector<double> rel;
  for (std::size_t t = 0; t < before.size(); ++t) {
    if (before.voiced[t] && after.voiced[t]) {
      rel.push_back(std::abs(after.f0_hz[t] - before.f0_hz[t]) / before.f0_hz[t]);
    }
  }
  REQUIRE(rel.size() > 10);
  std::sort(rel.begin(), rel.end());
  CHECK(rel[rel.size() / 2] < 0.05);
}

TEST_CASE("full anonymization logs ordered steps and is reproducible") {
  const auto manifest = TinyCorpus("anon_full");
  auto entries = LoadManifest(manifest);
  entries.resize(6);
  const EmbeddingPool pool = RandomPool(10, 3);
  AnonymizationConfig cfg = SmallConfig(true, true);
  const auto a = testutil::ScratchDir("anon_full_a");
  const auto b = testutil::ScratchDir("anon_full_b");
  cfg.jobs = 1;
  const AnonymizationResult ra = AnonymizeCorpus(entries, pool, cfg, a);
  cfg.jobs = 3;
  AnonymizeCorpus(entries, pool, cfg, b);
  for (const auto& u : ra.utterances) {
    CHECK(u.steps == std::vector<std::string>{"extract_f0", "linear_transform", "random_warp",
                                              "synthesize"});
    REQUIRE(u.alpha.has_value());
    CHECK(*u.alpha >= 0.8);
    CHECK(*u.alpha <= 1.2);
    CHECK(u.pseudo_ids.size() == 3);
  }
  CHECK(ra.speakers.size() == 1);
  CHECK(Bytes(a / "manifest.jsonl") == Bytes(b / "manifest.jsonl"));
  CHECK(Bytes(a / "anonymization_log.jsonl") == Bytes(b / "anonymization_log.jsonl"));
  for (const auto& e : ra.entries) {
    CHECK(Bytes(e.path) == Bytes(b / "wav" / e.path.filename()));
  }
}

TEST_CASE("failing utterances are reported and the run continues") {
  const auto manifest = TinyCorpus("anon_fail");
  auto entries = LoadManifest(manifest);
  entries.resize(3);
  AudioBuffer tiny;
  tiny.sample_rate = 16000;
  tiny.samples.assign(100, 0.1);
  const auto dir = manifest.parent_path();
  WriteWav(tiny, dir / "tiny.wav");
  entries[1].path = dir / "tiny.wav";
  const auto out = testutil::ScratchDir("anon_fail_out");
  const AnonymizationResult r = AnonymizeCorpus(entries, RandomPool(10, 4), SmallConfig(true, false), out);
  CHECK(r.entries.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].id == entries[1].id);
  CHECK(fs::exists(out / "errors.jsonl"));
}

TEST_CASE("small end-to-end run with transcripts and overlap metadata") {
  const auto manifest = TinyCorpus("e2e_small");
  auto entries = LoadManifest(manifest);
  const auto dir = manifest.parent_path();
  std::ofstream hyp(dir / "hyp.tsv");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].overlap_ratio = 0.05 * static_cast<double>(i % 10);
    hyp << entries[i].id << '\t' << *entries[i].transcript << '\n';
  }
  hyp.close();
  SaveManifest(entries, dir / "with_overlap.jsonl");

  ExperimentConfig cfg;
  cfg.anonymization = SmallConfig(true, true);
  cfg.hyp_original = dir / "hyp.tsv";
  cfg.hyp_anonymized = dir / "hyp.tsv";
  AccessAudit audit;
  const auto out = testutil::ScratchDir("e2e_small_out");
  const ExperimentReport rep =
      RunExperiment(dir / "with_overlap.jsonl", RandomPool(10, 6), cfg, out, &audit);
  CHECK(rep.n_utterances == entries.size());
  CHECK(rep.scenarios.size() == 3);
  REQUIRE(rep.wer.has_value());
  CHECK(rep.wer->original.errors() == 0);
  REQUIRE(rep.eer.has_value());
  CHECK(rep.eer->n_target == rep.eer->n_nontarget);
  std::size_t stratified = 0;
  for (const auto& s : rep.strata) {
    if (s.scenario == Scenario::kBaseline) stratified += s.n;
  }
  CHECK(stratified == entries.size());
  for (const AccessRecord& rec : audit.records()) {
    if (rec.training && rec.scenario == Scenario::kIgnorant) CHECK(rec.source == DataSource::kOriginal);
    if (rec.training && rec.scenario == Scenario::kInformed) CHECK(rec.source == DataSource::kAnonymized);
  }
  CHECK(fs::exists(out / "features" / "original_egemaps_subset.vxft"));
  const FeatureTable ft = LoadFeatureTable(out / "features" / "anonymized_egemaps_subset.vxft");
  CHECK(ft.ids.size() == entries.size());
  CHECK(rep.config["speaker_f0_stats"] == "global_per_corpus");
  CHECK(rep.config["manifest"]["file"] == "with_overlap.jsonl");
  CHECK(rep.alpha_log.size() == entries.size());
}
