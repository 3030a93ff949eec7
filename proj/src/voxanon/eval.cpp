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

#include "voxanon/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"
#include "voxanon/common.hpp"

namespace voxanon {

using nlohmann::json;

void Standardizer::Fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw ValidationError("cannot standardize an empty matrix");
  mean_ = x.colwise().mean().transpose();
  std_.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double var = (x.col(c).array() - mean_[c]).square().mean();
    std_[c] = std::max(std::sqrt(var), kStdFloor);
  }
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean_.size()) throw ValidationError("standardizer dimension mismatch");
  Eigen::MatrixXd out = x;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    out.col(c) = (x.col(c).array() - mean_[c]) / std_[c];
  }
  return out;
}

namespace {

struct SmoResult {
  std::vector<double> alpha;
  double rho = 0.0;
  std::size_t iterations = 0;
};

// Dual of the C-SVM, min 0.5 a'Qa - e'a subject to 0 <= a <= C, y'a = 0,
// with second-order working-set selection.
SmoResult SolveSmo(const Eigen::MatrixXd& k, const std::vector<int>& y, double c,
                   double tol) {
  const auto n = static_cast<std::size_t>(k.rows());
  constexpr double kTau = 1e-12;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  auto q = [&](std::size_t i, std::size_t j) {
    return y[i] * y[j] * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
  };

  const std::size_t stall_limit = 10 * n;
  const std::size_t hard_limit = std::max<std::size_t>(10'000'000, 100 * n);
  double best_gap = kInf;
  std::size_t stalled = 0;
  std::size_t iter = 0;

  for (; iter < hard_limit; ++iter) {
    double gmax = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    double gmax2 = -kInf;
    double obj_min = kInf;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, y[t] * grad[t]);
      const double diff = gmax + y[t] * grad[t];
      if (i < n && diff > 0.0) {
        double a = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +
                   k(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t)) -
                   2.0 * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        if (a <= 0.0) a = kTau;
        const double obj = -(diff * diff) / a;
        if (obj < obj_min) {
          obj_min = obj;
          j = t;
        }
      }
    }
    const double gap = gmax + gmax2;
    if (i == n || j == n || gap < tol) break;
    if (gap < best_gap) {
      best_gap = gap;
      stalled = 0;
    } else if (++stalled > stall_limit) {
      break;
    }

    const double old_ai = alpha[i], old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }
    const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * dai + q(t, j) * daj;
  }

  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  SmoResult res;
  res.rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;
  res.alpha = std::move(alpha);
  res.iterations = iter;
  return res;
}

}  // namespace

double SvmModel::Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return std::exp(-gamma_ * (a - b).squaredNorm());
}

SvmModel SvmModel::Train(const Eigen::MatrixXd& x, std::span<const int> y,
                         const SvmParams& params, int jobs) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) {
    throw ValidationError("feature rows and labels differ in count");
  }
  if (!x.allFinite()) throw ValidationError("non-finite training features");
  if (!(params.c > 0.0)) throw ValidationError("SVM C must be positive");
  const std::set<int> distinct(y.begin(), y.end());
  if (distinct.size() < 2) throw ValidationError("SVM training needs at least two classes");

  SvmModel model;
  model.classes_.assign(distinct.begin(), distinct.end());
  model.c_ = params.c;
  if (params.gamma > 0.0) {
    model.gamma_ = params.gamma;
  } else {
    const double var = (x.array() - x.mean()).square().mean();
    model.gamma_ = var > 0.0 ? 1.0 / (x.cols() * var) : 1.0 / x.cols();
  }

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < model.classes_.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes_.size(); ++b) {
      pairs.emplace_back(model.classes_[a], model.classes_[b]);
    }
  }
  model.machines_.resize(pairs.size());
  ParallelFor(pairs.size(), jobs, [&](std::size_t p) {
    const auto [first, second] = pairs[p];
    std::vector<Eigen::Index> rows;
    std::vector<int> labels;
    for (std::size_t r = 0; r < y.size(); ++r) {
      if (y[r] == first || y[r] == second) {
        rows.push_back(static_cast<Eigen::Index>(r));
        labels.push_back(y[r] == first ? 1 : -1);
      }
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd kmat(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      kmat(a, a) = 1.0;
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double v = model.Kernel(x.row(rows[a]).transpose(), x.row(rows[b]).transpose());
        kmat(a, b) = v;
        kmat(b, a) = v;
      }
    }
    const SmoResult res = SolveSmo(kmat, labels, params.c, params.tolerance);

    BinarySvm m;
    m.first = first;
    m.second = second;
    m.bias = -res.rho;
    m.iterations = res.iterations;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index a = 0; a < n; ++a) {
      if (res.alpha[static_cast<std::size_t>(a)] > 0.0) sv.push_back(a);
    }
    m.support.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
    m.coef.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
      const auto a = sv[s];
      const auto si = static_cast<Eigen::Index>(s);
      m.support.row(si) = x.row(rows[a]);
      m.alpha.push_back(res.alpha[static_cast<std::size_t>(a)]);
      m.coef[si] = labels[static_cast<std::size_t>(a)] * res.alpha[static_cast<std::size_t>(a)];
    }
    model.machines_[p] = std::move(m);
  });
  return model;
}

double SvmModel::DecisionValue(std::size_t pair, const Eigen::VectorXd& row) const {
  const BinarySvm& m = machines_.at(pair);
  double f = m.bias;
  for (Eigen::Index s = 0; s < m.support.rows(); ++s) {
    f += m.coef[s] * Kernel(m.support.row(s).transpose(), row);
  }
  return f;
}

int SvmModel::Predict(const Eigen::VectorXd& row) const {
  std::map<int, int> votes;
  for (int c : classes_) votes[c] = 0;
  for (std::size_t p = 0; p < machines_.size(); ++p) {
    const BinarySvm& m = machines_[p];
    ++votes[DecisionValue(p, row) > 0.0 ? m.first : m.second];
  }
  int best = classes_.front();
  int best_votes = -1;
  for (const auto& [cls, v] : votes) {  // ascending class id
    if (v > best_votes) {
      best = cls;
      best_votes = v;
    }
  }
  return best;
}

std::vector<int> SvmModel::Predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Eigen::VectorXd row = x.row(r).transpose();
    out.push_back(Predict(row));
  }
  return out;
}

void SvmModel::Save(const std::filesystem::path& path) const {
  json j;
  j["format"] = "voxanon-svm";
  j["version"] = kFormatVersion;
  j["gamma"] = gamma_;
  j["c"] = c_;
  j["classes"] = classes_;
  j["machines"] = json::array();
  for (const BinarySvm& m : machines_) {
    json support = json::array();
    for (Eigen::Index s = 0; s < m.support.rows(); ++s) {
      support.push_back(std::vector<double>(m.support.row(s).begin(), m.support.row(s).end()));
    }
    j["machines"].push_back({{"first", m.first},
                             {"second", m.second},
                             {"bias", m.bias},
                             {"alpha", m.alpha},
                             {"coef", std::vector<double>(m.coef.begin(), m.coef.end())},
                             {"support", support}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << j.dump() << '\n';
}

SvmModel SvmModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path.string());
  SvmModel model;
  try {
    json j;
    in >> j;
    if (j.value("format", "") != "voxanon-svm" || j.value("version", 0) != kFormatVersion) {
      throw IoError("not a supported model file: " + path.string());
    }
    model.gamma_ = j.at("gamma").get<double>();
    model.c_ = j.at("c").get<double>();
    model.classes_ = j.at("classes").get<std::vector<int>>();
    for (const json& jm : j.at("machines")) {
      BinarySvm m;
      m.first = jm.at("first").get<int>();
      m.second = jm.at("second").get<int>();
      m.bias = jm.at("bias").get<double>();
      m.alpha = jm.at("alpha").get<std::vector<double>>();
      const auto coef = jm.at("coef").get<std::vector<double>>();
      const auto support = jm.at("support").get<std::vector<std::vector<double>>>();
      m.coef = Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
      const Eigen::Index dim = support.empty() ? 0 : static_cast<Eigen::Index>(support[0].size());
      m.support.resize(static_cast<Eigen::Index>(support.size()), dim);
      for (std::size_t s = 0; s < support.size(); ++s) {
        for (Eigen::Index d = 0; d < dim; ++d) m.support(static_cast<Eigen::Index>(s), d) = support[s][static_cast<std::size_t>(d)];
      }
      model.machines_.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed model file " + path.string() + ": " + e.what());
  }
  return model;
}

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes)
    : n_(n_classes), counts_(n_classes * n_classes, 0) {}

void ConfusionMatrix::Add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= n_ || predicted >= n_) throw ValidationError("class index out of range");
  counts_[truth * n_ + predicted] += count;
}

void ConfusionMatrix::Merge(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw ValidationError("confusion matrix size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::RowSum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += count(truth, p);
  return s;
}

std::uint64_t ConfusionMatrix::Total() const {
  std::uint64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

double ConfusionMatrix::Recall(std::size_t truth) const {
  const std::uint64_t row = RowSum(truth);
  if (row == 0) throw ValidationError("class " + std::to_string(truth) + " has no instances");
  return static_cast<double>(count(truth, truth)) / static_cast<double>(row);
}

double Uar(const ConfusionMatrix& cm) {
  if (cm.n_classes() == 0) throw ValidationError("UAR of an empty confusion matrix");
  double sum = 0.0;
  for (std::size_t c = 0; c < cm.n_classes(); ++c) sum += cm.Recall(c);
  return sum / static_cast<double>(cm.n_classes());
}

double Eer(std::span<const double> target_scores,
           std::span<const double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty()) {
    throw ValidationError("EER needs target and non-target trials");
  }
  std::vector<double> tgt(target_scores.begin(), target_scores.end());
  std::vector<double> non(nontarget_scores.begin(), nontarget_scores.end());
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thresholds;
  thresholds.reserve(tgt.size() + non.size());
  std::merge(tgt.begin(), tgt.end(), non.begin(), non.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double nt = static_cast<double>(tgt.size());
  const double nn = static_cast<double>(non.size());
  std::size_t below_t = 0, below_n = 0;
  double prev_frr = 0.0, prev_diff = 0.0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double th = thresholds[k];
    while (below_t < tgt.size() && tgt[below_t] < th) ++below_t;
    while (below_n < non.size() && non[below_n] < th) ++below_n;
    const double frr = below_t / nt;
    const double far = (non.size() - below_n) / nn;
    const double diff = frr - far;
    if (diff >= 0.0) {
      if (diff == 0.0 || k == 0) return frr;
      const double t = -prev_diff / (diff - prev_diff);
      return prev_frr + t * (frr - prev_frr);
    }
    prev_frr = frr;
    prev_diff = diff;
  }
  return 1.0;  // unreachable: the +infinity threshold has diff = 1
}

double Eer(std::span<const Trial> trials, std::span<const double> scores) {
  if (trials.size() != scores.size()) throw ValidationError("one score per trial required");
  std::vector<double> tgt, non;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].utterance_a == trials[i].utterance_b) {
      throw ValidationError("trial pairs an utterance with itself: " + trials[i].utterance_a);
    }
    (trials[i].same_speaker ? tgt : non).push_back(scores[i]);
  }
  return Eer(tgt, non);
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      flush();
    } else if (!std::ispunct(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  flush();
  return out;
}

WerResult Wer(std::span<const std::string> reference,
              std::span<const std::string> hypothesis) {
  if (reference.empty()) throw ValidationError("WER reference is empty");
  const std::size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }
  // Backtrace preferring match/substitution, then deletion, then insertion.
  WerResult r;
  r.n_ref = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (d[i][j] == d[i - 1][j - 1] + (same ? 0 : 1)) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  r.wer_percent = 100.0 * static_cast<double>(r.errors()) / static_cast<double>(n);
  return r;
}

WerResult WerText(std::string_view reference, std::string_view hypothesis) {
  const auto ref = Tokenize(reference);
  const auto hyp = Tokenize(hypothesis);
  return Wer(ref, hyp);
}

Interval WilsonInterval(double proportion, double n, double z) {
  if (!(n > 0.0)) throw ValidationError("Wilson interval needs n > 0");
  if (proportion < 0.0 || proportion > 1.0) {
    throw ValidationError("proportion must lie in [0, 1]");
  }
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (proportion + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(proportion * (1.0 - proportion) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds touch 0 and 1 exactly at the extreme proportions.
  const double lo = proportion == 0.0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = proportion == 1.0 ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

double RelativeDegradation(double baseline, double value, bool higher_is_better) {
  if (baseline == 0.0) throw ValidationError("relative degradation against a zero baseline");
  const double delta = higher_is_better ? baseline - value : value - baseline;
  return 100.0 * delta / baseline;
}

std::string DegradationLabel(double degradation_percent) {
  const long rounded = std::lround(std::abs(degradation_percent));
  if (degradation_percent < 0.0 && rounded != 0) {
    return std::to_string(rounded) + "% improvement";
  }
  return std::to_string(rounded) + "% degradation";
}

}  // namespace voxanon
