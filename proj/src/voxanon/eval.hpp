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

// Classifier and metrics: one-vs-one RBF SVM trained by SMO, unweighted
// average recall, equal error rate over verification trials, word error rate,
// and the Wilson score interval.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace voxanon {

// Per-dimension z-scoring learned on a training fold.
class Standardizer {
 public:
  static constexpr double kStdFloor = 1e-8;

  void Fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& std() const { return std_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd std_;
};

struct SvmParams {
  double c = 1.0;
  // <= 0 selects 1 / (d * var(X)) over all training entries.
  double gamma = 0.0;
  double tolerance = 1e-3;
};

// Two-class RBF machine; positive decision values vote for `first`.
struct BinarySvm {
  int first = 0;
  int second = 1;
  Eigen::MatrixXd support;   // one row per support vector
  Eigen::VectorXd coef;      // y_i * alpha_i
  std::vector<double> alpha; // in [0, C]
  double bias = 0.0;
  std::size_t iterations = 0;
};

class SvmModel {
 public:
  static constexpr int kFormatVersion = 1;

  // Labels are arbitrary non-negative class ids; at least two must occur.
  // Class pairs are trained on up to `jobs` threads.
  static SvmModel Train(const Eigen::MatrixXd& x, std::span<const int> y,
                        const SvmParams& params = {}, int jobs = 1);

  // Pairwise vote; ties go to the lowest class id.
  int Predict(const Eigen::VectorXd& row) const;
  std::vector<int> Predict(const Eigen::MatrixXd& x) const;
  double DecisionValue(std::size_t pair, const Eigen::VectorXd& row) const;

  const std::vector<int>& classes() const { return classes_; }
  const std::vector<BinarySvm>& machines() const { return machines_; }
  double gamma() const { return gamma_; }
  double c() const { return c_; }

  void Save(const std::filesystem::path& path) const;
  static SvmModel Load(const std::filesystem::path& path);

 private:
  double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  std::vector<int> classes_;
  std::vector<BinarySvm> machines_;
  double gamma_ = 1.0;
  double c_ = 1.0;
};

// counts[true][predicted].
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes = 0);

  void Add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);
  void Merge(const ConfusionMatrix& other);

  std::size_t n_classes() const { return n_; }
  std::uint64_t count(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * n_ + predicted];
  }
  std::uint64_t RowSum(std::size_t truth) const;
  std::uint64_t Total() const;
  double Recall(std::size_t truth) const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

// Mean of per-class recalls. Throws if any class has no true instance.
double Uar(const ConfusionMatrix& cm);

struct Trial {
  std::string utterance_a;
  std::string utterance_b;
  bool same_speaker = false;
};

// Accepting when score >= threshold, sweeps every distinct score (plus
// +infinity) and linearly interpolates false-reject minus false-accept to
// its zero crossing.
double Eer(std::span<const double> target_scores,
           std::span<const double> nontarget_scores);
double Eer(std::span<const Trial> trials, std::span<const double> scores);

struct WerResult {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t n_ref = 0;
  double wer_percent = 0.0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
};

// Case-folds, strips punctuation and splits on whitespace.
std::vector<std::string> Tokenize(std::string_view text);

WerResult Wer(std::span<const std::string> reference,
              std::span<const std::string> hypothesis);
WerResult WerText(std::string_view reference, std::string_view hypothesis);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

Interval WilsonInterval(double proportion, double n, double z = kZ95);

// Percentage by which `value` is worse than `baseline`. For metrics where
// higher is better (UAR) that is 100*(baseline - value)/baseline; for error
// rates (WER) the sign flips.
double RelativeDegradation(double baseline, double value, bool higher_is_better);

// "15% degradation" / "3% improvement", rounded to whole percent.
std::string DegradationLabel(double degradation_percent);

}  // namespace voxanon
