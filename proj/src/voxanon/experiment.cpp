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

#include "voxanon/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "voxanon/common.hpp"
#include "voxanon/signal.hpp"
#include "voxanon/speaker_space.hpp"

namespace voxanon {

namespace fs = std::filesystem;

std::string_view ToString(Scenario s) {
  switch (s) {
    case Scenario::kBaseline: return "baseline";
    case Scenario::kIgnorant: return "ignorant";
    case Scenario::kInformed: return "informed";
  }
  return "?";
}

Scenario ParseScenario(std::string_view name) {
  if (name == "baseline") return Scenario::kBaseline;
  if (name == "ignorant") return Scenario::kIgnorant;
  if (name == "informed") return Scenario::kInformed;
  throw ValidationError("unknown scenario '" + std::string(name) +
                        "' (expected baseline, ignorant or informed)");
}

std::string_view ToString(DataSource s) {
  return s == DataSource::kOriginal ? "original" : "anonymized";
}

void AccessAudit::Record(AccessRecord r) {
  std::lock_guard<std::mutex> lock(mu_);
  records_.push_back(std::move(r));
}

std::vector<AccessRecord> AccessAudit::records() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

Classifier MakeSvmClassifier(const SvmParams& params, int jobs) {
  return [params, jobs](const Eigen::MatrixXd& train_x, std::span<const int> train_y,
                        const Eigen::MatrixXd& test_x) {
    Standardizer scaler;
    scaler.Fit(train_x);
    const SvmModel model = SvmModel::Train(scaler.Apply(train_x), train_y, params, jobs);
    return model.Predict(scaler.Apply(test_x));
  };
}

namespace {

Eigen::MatrixXd GatherRows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

// Mean recall over the classes that have at least one instance.
double UarPresent(const ConfusionMatrix& cm) {
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < cm.n_classes(); ++c) {
    if (cm.RowSum(c) == 0) continue;
    sum += cm.Recall(c);
    ++present;
  }
  return present == 0 ? 0.0 : sum / static_cast<double>(present);
}

}  // namespace

ScenarioResult RunScenario(Scenario scenario, const Eigen::MatrixXd& original,
                           const Eigen::MatrixXd* anonymized, std::span<const int> labels,
                           std::size_t n_classes, const std::vector<Fold>& folds,
                           const Classifier& classifier, AccessAudit* audit) {
  if (scenario != Scenario::kBaseline && anonymized == nullptr) {
    throw ValidationError(std::string(ToString(scenario)) +
                          " scenario needs anonymized features");
  }
  if (static_cast<std::size_t>(original.rows()) != labels.size() ||
      (anonymized != nullptr && anonymized->rows() != original.rows())) {
    throw ValidationError("feature matrices and labels disagree in length");
  }
  const DataSource train_src =
      scenario == Scenario::kInformed ? DataSource::kAnonymized : DataSource::kOriginal;
  const DataSource test_src =
      scenario == Scenario::kBaseline ? DataSource::kOriginal : DataSource::kAnonymized;
  const Eigen::MatrixXd& train_x_all =
      train_src == DataSource::kOriginal ? original : *anonymized;
  const Eigen::MatrixXd& test_x_all = test_src == DataSource::kOriginal ? original : *anonymized;

  ScenarioResult result;
  result.scenario = scenario;
  result.confusion = ConfusionMatrix(n_classes);
  result.predictions.assign(labels.size(), -1);
  for (const Fold& fold : folds) {
    if (audit != nullptr) {
      audit->Record({scenario, fold.session_id, true, train_src});
      audit->Record({scenario, fold.session_id, false, test_src});
    }
    std::vector<int> train_y;
    train_y.reserve(fold.train.size());
    for (std::size_t i : fold.train) train_y.push_back(labels[i]);
    const std::vector<int> pred =
        classifier(GatherRows(train_x_all, fold.train), train_y, GatherRows(test_x_all, fold.test));
    if (pred.size() != fold.test.size()) {
      throw std::runtime_error("classifier returned " + std::to_string(pred.size()) +
                               " predictions for " + std::to_string(fold.test.size()) +
                               " test rows");
    }
    ConfusionMatrix cm(n_classes);
    for (std::size_t k = 0; k < fold.test.size(); ++k) {
      const std::size_t i = fold.test[k];
      if (pred[k] < 0 || static_cast<std::size_t>(pred[k]) >= n_classes) {
        throw std::runtime_error("classifier predicted out-of-range class " +
                                 std::to_string(pred[k]));
      }
      cm.Add(static_cast<std::size_t>(labels[i]), static_cast<std::size_t>(pred[k]));
      result.predictions[i] = pred[k];
    }
    result.folds.push_back({fold.session_id, fold.test.size(), UarPresent(cm)});
    result.confusion.Merge(cm);
  }
  result.uar = Uar(result.confusion);
  result.ci = WilsonInterval(result.uar, static_cast<double>(result.confusion.Total()));
  return result;
}

std::vector<Trial> GenerateTrials(const std::vector<LabeledEntry>& entries,
                                  const std::vector<bool>& usable, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (usable[i]) pool.push_back(i);
  }
  std::vector<Trial> trials;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      const ManifestEntry& ea = entries[pool[a]].entry;
      const ManifestEntry& eb = entries[pool[b]].entry;
      if (ea.speaker_id == eb.speaker_id && ea.session_id == eb.session_id) {
        trials.push_back({ea.id, eb.id, true});
      }
    }
  }
  const std::size_t n_target = trials.size();
  RandomStream rng(DeriveSeed(seed, "trials"));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 50 * n_target + 1000;
  while (seen.size() < n_target && attempts++ < max_attempts && pool.size() > 1) {
    std::size_t a = pool[rng.Below(pool.size())];
    std::size_t b = pool[rng.Below(pool.size())];
    if (entries[a].entry.speaker_id == entries[b].entry.speaker_id) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    trials.push_back({entries[a].entry.id, entries[b].entry.id, false});
  }
  return trials;
}

std::map<std::string, std::string> LoadTranscriptFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected utterance_id<TAB>text");
    }
    std::string id = line.substr(0, tab);
    if (!out.emplace(id, line.substr(tab + 1)).second) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": duplicate utterance id '" + id + "'");
    }
  }
  return out;
}

WerResult ScoreCorpusWer(const std::map<std::string, std::string>& reference,
                         const std::map<std::string, std::string>& hypothesis,
                         std::size_t* n_missing) {
  WerResult total;
  std::size_t missing = 0;
  for (const auto& [id, ref] : reference) {
    const auto it = hypothesis.find(id);
    if (it == hypothesis.end()) ++missing;
    const WerResult r = WerText(ref, it == hypothesis.end() ? std::string() : it->second);
    total.substitutions += r.substitutions;
    total.deletions += r.deletions;
    total.insertions += r.insertions;
    total.n_ref += r.n_ref;
  }
  if (total.n_ref == 0) throw ValidationError("reference transcripts contain no words");
  total.wer_percent = 100.0 * static_cast<double>(total.errors()) /
                      static_cast<double>(total.n_ref);
  if (n_missing != nullptr) *n_missing = missing;
  return total;
}

std::string ContentHash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, HashString(bytes));
  return buf;
}

namespace {

struct Analysis {
  bool ok = false;
  std::vector<double> features;
  std::optional<std::vector<double>> embedding;
  std::string error;
};

std::vector<Analysis> AnalyzeAll(const std::vector<fs::path>& paths, FeatureSet set,
                                 const PitchOptions& pitch, bool want_embedding, int jobs) {
  std::vector<Analysis> out(paths.size());
  EmbeddingOptions eopts;
  eopts.pitch = pitch;
  eopts.min_voiced_seconds = 0.2;
  ParallelFor(paths.size(), jobs, [&](std::size_t i) {
    Analysis& a = out[i];
    try {
      const AudioBuffer audio = ReadWav(paths[i]);
      const F0Track f0 = ExtractF0(audio, pitch);
      a.features = ExtractFeatures(audio, f0, set).values;
      a.ok = true;
      if (want_embedding) {
        try {
          a.embedding = ExtractEmbedding(std::span<const AudioBuffer>(&audio, 1),
                                         std::span<const F0Track>(&f0, 1), {}, eopts)
                            .vector;
        } catch (const std::exception&) {
          a.embedding.reset();
        }
      }
    } catch (const std::exception& e) {
      a.error = e.what();
    }
  });
  return out;
}

std::string HexHash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::uint64_t PoolHash(const EmbeddingPool& pool) {
  std::uint64_t h = HashString("pool");
  char buf[64];
  for (const PoolEntry& e : pool.entries()) {
    h = HashString(e.speaker_id, h);
    for (double v : e.embedding) {
      std::snprintf(buf, sizeof buf, "%.17g;", v);
      h = HashString(buf, h);
    }
    std::snprintf(buf, sizeof buf, "%.17g;%.17g;", e.f0_stats.mu_log, e.f0_stats.sigma_log);
    h = HashString(buf, h);
  }
  return h;
}

const char* BucketFor(double ratio) {
  if (ratio < 0.1) return "[0.0,0.1)";
  if (ratio < 0.3) return "[0.1,0.3)";
  return "[0.3,1.0]";
}

}  // namespace

ExperimentReport RunExperiment(const fs::path& manifest, const EmbeddingPool& pool,
                               const ExperimentConfig& cfg, const fs::path& out_dir,
                               AccessAudit* audit) {
  if (cfg.scenarios.empty()) throw ValidationError("no scenarios requested");
  cfg.anonymization.Validate();

  ExperimentReport report;
  std::vector<std::string> warnings;
  const std::vector<ManifestEntry> raw = LoadManifest(manifest, &warnings);
  LabelMapping mapping = MapLabels(raw, cfg.strict_labels);
  report.dropped_labels = mapping.dropped;
  for (auto& w : warnings) report.notes.push_back(w);
  for (auto& w : mapping.warnings) report.notes.push_back(w);
  std::vector<LabeledEntry> entries = std::move(mapping.entries);
  SplitLoso(entries);  // validate session structure before any heavy work

  const bool need_anon =
      cfg.compute_eer || std::any_of(cfg.scenarios.begin(), cfg.scenarios.end(),
                                     [](Scenario s) { return s != Scenario::kBaseline; });
  fs::create_directories(out_dir);

  std::map<std::string, fs::path> anon_path;
  std::map<std::string, std::optional<double>> alpha_of;
  if (need_anon) {
    std::vector<ManifestEntry> plain;
    plain.reserve(entries.size());
    for (const auto& e : entries) plain.push_back(e.entry);
    AnonymizationResult anon = AnonymizeCorpus(plain, pool, cfg.anonymization,
                                               out_dir / "anonymized");
    for (const auto& e : anon.entries) anon_path[e.id] = e.path;
    for (const auto& u : anon.utterances) alpha_of[u.id] = u.alpha;
    report.anonymization_errors = anon.errors;
    if (!anon.errors.empty()) {
      std::vector<LabeledEntry> kept;
      for (auto& e : entries) {
        if (anon_path.count(e.entry.id) != 0) kept.push_back(std::move(e));
      }
      report.notes.push_back(std::to_string(entries.size() - kept.size()) +
                             " utterances failed anonymization and were excluded");
      entries = std::move(kept);
    }
  }

  // Original-side analysis.
  std::vector<fs::path> orig_paths;
  for (const auto& e : entries) orig_paths.push_back(e.entry.path);
  const int jobs = cfg.anonymization.jobs;
  std::vector<Analysis> orig =
      AnalyzeAll(orig_paths, cfg.feature_set, cfg.anonymization.pitch, cfg.compute_eer, jobs);
  std::vector<Analysis> anon;
  if (need_anon) {
    std::vector<fs::path> anon_paths;
    for (const auto& e : entries) anon_paths.push_back(anon_path.at(e.entry.id));
    anon = AnalyzeAll(anon_paths, cfg.feature_set, cfg.anonymization.pitch, cfg.compute_eer,
                      jobs);
  }
  {
    std::vector<LabeledEntry> kept;
    std::vector<Analysis> kept_orig, kept_anon;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const bool ok = orig[i].ok && (!need_anon || anon[i].ok);
      if (!ok) {
        const std::string& why = !orig[i].ok ? orig[i].error : anon[i].error;
        report.notes.push_back("excluded " + entries[i].entry.id + ": " + why);
        continue;
      }
      kept.push_back(std::move(entries[i]));
      kept_orig.push_back(orig[i]);
      if (need_anon) kept_anon.push_back(anon[i]);
    }
    entries = std::move(kept);
    orig = std::move(kept_orig);
    anon = std::move(kept_anon);
  }
  const std::vector<Fold> folds = SplitLoso(entries);
  report.n_utterances = entries.size();

  // Dense class indices in canonical order over the classes present.
  std::vector<Emotion> present;
  for (Emotion e : kAllEmotions) {
    if (std::any_of(entries.begin(), entries.end(),
                    [e](const LabeledEntry& le) { return le.label == e; })) {
      present.push_back(e);
    }
  }
  for (Emotion e : present) report.class_names.emplace_back(ToString(e));
  std::vector<int> labels;
  for (const auto& le : entries) {
    labels.push_back(static_cast<int>(std::find(present.begin(), present.end(), le.label) -
                                      present.begin()));
  }

  const std::size_t dim = FeatureDimension(cfg.feature_set);
  const auto n = static_cast<Eigen::Index>(entries.size());
  Eigen::MatrixXd x_orig(n, static_cast<Eigen::Index>(dim));
  Eigen::MatrixXd x_anon;
  for (Eigen::Index i = 0; i < n; ++i) {
    x_orig.row(i) = Eigen::Map<const Eigen::RowVectorXd>(orig[i].features.data(),
                                                        static_cast<Eigen::Index>(dim));
  }
  if (need_anon) {
    x_anon.resize(n, static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < n; ++i) {
      x_anon.row(i) = Eigen::Map<const Eigen::RowVectorXd>(anon[i].features.data(),
                                                          static_cast<Eigen::Index>(dim));
    }
  }

  // Config echo: only inputs that determine the results, no absolute paths.
  const std::string manifest_hash = ContentHash(manifest);
  const std::uint64_t pool_hash = PoolHash(pool);
  const AnonymizationConfig& ac = cfg.anonymization;
  nlohmann::ordered_json conf;
  conf["manifest"] = {{"file", manifest.filename().string()}, {"content_hash", manifest_hash}};
  conf["pool"] = {{"size", pool.size()}, {"hash", HexHash(pool_hash)}};
  conf["seed"] = ac.seed;
  conf["feature_set"] = std::string(ToString(cfg.feature_set));
  nlohmann::json scen = nlohmann::json::array();
  for (Scenario s : cfg.scenarios) scen.push_back(std::string(ToString(s)));
  conf["scenarios"] = scen;
  conf["f0_linear"] = ac.flags.linear_transform;
  conf["f0_warp"] = ac.flags.random_warp;
  conf["warp_alpha_range"] = {ac.warp.alpha_min, ac.warp.alpha_max};
  conf["pseudo_speaker"] = {
      {"n_far", ac.pseudo.n_far},
      {"n_sel", ac.pseudo.n_sel},
      {"scope", ac.scope == PseudoSpeakerScope::kPerSpeaker ? "per_speaker" : "per_utterance"}};
  conf["synthesis"] = {{"lpc_order", ac.synth.lpc_order},
                       {"mcadams_range", {ac.synth.mcadams_min, ac.synth.mcadams_max}}};
  conf["pitch"] = {{"fmin", ac.pitch.fmin},
                   {"fmax", ac.pitch.fmax},
                   {"yin_threshold", ac.pitch.yin_threshold}};
  conf["svm"] = {{"kernel", "rbf"},
                 {"c", cfg.svm.c},
                 {"gamma", cfg.svm.gamma > 0.0 ? nlohmann::json(cfg.svm.gamma)
                                               : nlohmann::json("scale")},
                 {"tolerance", cfg.svm.tolerance},
                 {"standardize", "train_fold"}};
  conf["strict_labels"] = cfg.strict_labels;
  conf["cross_validation"] = "leave_one_session_out";
  conf["ci_method"] = "wilson_95";
  conf["speaker_f0_stats"] = "global_per_corpus";
  if (cfg.hyp_original) {
    conf["hyp_original"] = {{"file", cfg.hyp_original->filename().string()},
                            {"content_hash", ContentHash(*cfg.hyp_original)}};
  }
  if (cfg.hyp_anonymized) {
    conf["hyp_anonymized"] = {{"file", cfg.hyp_anonymized->filename().string()},
                              {"content_hash", ContentHash(*cfg.hyp_anonymized)}};
  }
  report.config = conf;

  // Feature tables, keyed by the pipeline that produced them.
  {
    const std::uint64_t key_orig =
        DeriveSeed(HashString(manifest_hash), std::string("features:") +
                                                  std::string(ToString(cfg.feature_set)));
    FeatureTable t;
    t.feature_set = cfg.feature_set;
    t.pipeline_hash = key_orig;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      t.ids.push_back(entries[i].entry.id);
      t.rows.push_back(orig[i].features);
    }
    fs::create_directories(out_dir / "features");
    SaveFeatureTable(t, out_dir / "features" /
                            ("original_" + std::string(ToString(cfg.feature_set)) + ".vxft"));
    if (need_anon) {
      t.pipeline_hash = HashCombine(HashCombine(key_orig, pool_hash),
                                    HashString(report.config.dump()));
      for (std::size_t i = 0; i < entries.size(); ++i) t.rows[i] = anon[i].features;
      SaveFeatureTable(t, out_dir / "features" /
                              ("anonymized_" + std::string(ToString(cfg.feature_set)) +
                               ".vxft"));
    }
  }

  const Classifier classifier = MakeSvmClassifier(cfg.svm, jobs);
  for (Scenario s : cfg.scenarios) {
    report.scenarios.push_back(RunScenario(s, x_orig, need_anon ? &x_anon : nullptr, labels,
                                           present.size(), folds, classifier, audit));
  }
  const auto base = std::find_if(report.scenarios.begin(), report.scenarios.end(),
                                 [](const ScenarioResult& r) {
                                   return r.scenario == Scenario::kBaseline;
                                 });
  if (base != report.scenarios.end()) {
    for (ScenarioResult& r : report.scenarios) {
      if (base->uar > 0.0) r.degradation_pct = RelativeDegradation(base->uar, r.uar, true);
    }
  }

  if (cfg.compute_eer) {
    std::vector<bool> usable(entries.size());
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      usable[i] = orig[i].embedding.has_value() && anon[i].embedding.has_value();
      if (!usable[i]) ++excluded;
    }
    const std::vector<Trial> trials = GenerateTrials(entries, usable, ac.seed);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < entries.size(); ++i) index[entries[i].entry.id] = i;
    std::vector<double> s_orig, s_anon;
    EerSummary eer;
    eer.n_excluded = excluded;
    for (const Trial& t : trials) {
      const std::size_t a = index.at(t.utterance_a);
      const std::size_t b = index.at(t.utterance_b);
      s_orig.push_back(1.0 - CosineDistance(*orig[a].embedding, *orig[b].embedding));
      s_anon.push_back(1.0 - CosineDistance(*orig[a].embedding, *anon[b].embedding));
      (t.same_speaker ? eer.n_target : eer.n_nontarget) += 1;
    }
    if (eer.n_target > 0 && eer.n_nontarget > 0) {
      eer.original = Eer(trials, s_orig);
      eer.anonymized = Eer(trials, s_anon);
      report.eer = eer;
    } else {
      report.notes.push_back("EER skipped: trial list lacks target or non-target pairs");
    }
  }

  if (cfg.hyp_original || cfg.hyp_anonymized) {
    std::map<std::string, std::string> reference;
    for (const auto& le : entries) {
      if (le.entry.transcript) reference[le.entry.id] = *le.entry.transcript;
    }
    if (reference.empty()) {
      report.notes.push_back("WER skipped: no entry carries a transcript");
    } else {
      WerSummary w;
      w.n_scored = reference.size();
      if (cfg.hyp_original) {
        w.original = ScoreCorpusWer(reference, LoadTranscriptFile(*cfg.hyp_original),
                                    &w.n_missing_hyp);
      }
      if (cfg.hyp_anonymized) {
        std::size_t missing = 0;
        w.anonymized = ScoreCorpusWer(reference, LoadTranscriptFile(*cfg.hyp_anonymized),
                                      &missing);
        w.n_missing_hyp += missing;
      }
      report.wer = w;
    }
  }

  const bool has_overlap = std::any_of(entries.begin(), entries.end(), [](const LabeledEntry& e) {
    return e.entry.overlap_ratio.has_value();
  });
  if (has_overlap) {
    for (const ScenarioResult& r : report.scenarios) {
      std::map<std::string, ConfusionMatrix> by_bucket;
      std::map<std::string, std::size_t> counts;
      for (const char* b : {"[0.0,0.1)", "[0.1,0.3)", "[0.3,1.0]"}) {
        by_bucket.emplace(b, ConfusionMatrix(present.size()));
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& ratio = entries[i].entry.overlap_ratio;
        if (!ratio || r.predictions[i] < 0) continue;
        const char* b = BucketFor(*ratio);
        by_bucket.at(b).Add(static_cast<std::size_t>(labels[i]),
                            static_cast<std::size_t>(r.predictions[i]));
        ++counts[b];
      }
      for (const char* b : {"[0.0,0.1)", "[0.1,0.3)", "[0.3,1.0]"}) {
        if (counts[b] == 0) continue;
        report.strata.push_back({b, r.scenario, counts[b], UarPresent(by_bucket.at(b))});
      }
    }
  }
  if (need_anon) {
    report.alpha_log_file = "anonymized/anonymization_log.jsonl";
    for (const auto& le : entries) report.alpha_log.emplace_back(le.entry.id, alpha_of[le.entry.id]);
  }
  return report;
}

}  // namespace voxanon
