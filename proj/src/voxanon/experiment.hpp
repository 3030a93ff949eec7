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

// Attack-scenario evaluation. Baseline trains and tests on original speech,
// the ignorant attacker trains on original and tests on anonymized speech,
// the informed attacker trains and tests on anonymized speech. All three use
// leave-one-session-out folds and a UAR over the pooled confusion matrix.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "voxanon/anonymize.hpp"
#include "voxanon/emo_features.hpp"
#include "voxanon/eval.hpp"
#include "voxanon/manifest.hpp"

namespace voxanon {

enum class Scenario { kBaseline, kIgnorant, kInformed };

std::string_view ToString(Scenario s);
Scenario ParseScenario(std::string_view name);

enum class DataSource { kOriginal, kAnonymized };

std::string_view ToString(DataSource s);

struct AccessRecord {
  Scenario scenario;
  std::string fold;
  bool training = false;
  DataSource source;
};

// Records which feature source each scenario reads in each phase.
class AccessAudit {
 public:
  void Record(AccessRecord r);
  std::vector<AccessRecord> records() const;

 private:
  mutable std::mutex mu_;
  std::vector<AccessRecord> records_;
};

// Fits on (train_x, train_y) and predicts test_x.
using Classifier = std::function<std::vector<int>(
    const Eigen::MatrixXd& train_x, std::span<const int> train_y,
    const Eigen::MatrixXd& test_x)>;

// Standardizer fitted on the training fold, then a one-vs-one RBF SVM.
Classifier MakeSvmClassifier(const SvmParams& params, int jobs);

struct FoldScore {
  std::string session_id;
  std::size_t n_test = 0;
  double uar = 0.0;
};

struct ScenarioResult {
  Scenario scenario = Scenario::kBaseline;
  ConfusionMatrix confusion;
  double uar = 0.0;
  Interval ci;  // Wilson 95% on the pooled UAR, n = test instances
  std::vector<FoldScore> folds;
  std::vector<int> predictions;  // per entry, dense class index
  std::optional<double> degradation_pct;
};

// `anonymized` may be null for the baseline. Labels are dense class indices
// in [0, n_classes).
ScenarioResult RunScenario(Scenario scenario, const Eigen::MatrixXd& original,
                           const Eigen::MatrixXd* anonymized, std::span<const int> labels,
                           std::size_t n_classes, const std::vector<Fold>& folds,
                           const Classifier& classifier, AccessAudit* audit = nullptr);

// All same-speaker pairs within a session plus an equal number of sampled
// different-speaker pairs. Entries with usable[i] == false are skipped.
std::vector<Trial> GenerateTrials(const std::vector<LabeledEntry>& entries,
                                  const std::vector<bool>& usable, std::uint64_t seed);

struct ExperimentConfig {
  std::vector<Scenario> scenarios{Scenario::kBaseline, Scenario::kIgnorant,
                                  Scenario::kInformed};
  FeatureSet feature_set = FeatureSet::kEgemapsSubset;
  AnonymizationConfig anonymization;
  SvmParams svm;
  bool strict_labels = false;
  bool compute_eer = true;
  std::optional<std::filesystem::path> hyp_original;
  std::optional<std::filesystem::path> hyp_anonymized;
};

struct EerSummary {
  double original = 0.0;
  double anonymized = 0.0;
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
  std::size_t n_excluded = 0;
};

struct WerSummary {
  WerResult original;
  std::optional<WerResult> anonymized;
  std::size_t n_scored = 0;
  std::size_t n_missing_hyp = 0;
};

struct StratumResult {
  std::string bucket;
  Scenario scenario;
  std::size_t n = 0;
  double uar_present = 0.0;  // over classes present in the bucket
};

struct ExperimentReport {
  nlohmann::ordered_json config;
  std::vector<std::string> class_names;
  std::size_t n_utterances = 0;
  std::map<std::string, std::size_t> dropped_labels;
  std::vector<ScenarioResult> scenarios;
  std::optional<EerSummary> eer;
  std::optional<WerSummary> wer;
  std::vector<StratumResult> strata;
  std::vector<EntryError> anonymization_errors;
  std::vector<std::string> notes;
  std::string alpha_log_file;  // relative to the output directory
  std::vector<std::pair<std::string, std::optional<double>>> alpha_log;
};

// Anonymized audio, logs and feature tables are written under out_dir.
ExperimentReport RunExperiment(const std::filesystem::path& manifest,
                               const EmbeddingPool& pool, const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir,
                               AccessAudit* audit = nullptr);

// utterance_id<TAB>text per line.
std::map<std::string, std::string> LoadTranscriptFile(const std::filesystem::path& path);

// Corpus WER over the reference ids; a missing hypothesis counts as empty.
WerResult ScoreCorpusWer(const std::map<std::string, std::string>& reference,
                         const std::map<std::string, std::string>& hypothesis,
                         std::size_t* n_missing = nullptr);

std::string ContentHash(const std::filesystem::path& path);

}  // namespace voxanon
