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

#include "voxanon/emo_features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "voxanon/common.hpp"

namespace voxanon {

namespace {

constexpr double kMinDurationSeconds = 0.3;

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments MeanStd(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / v.size());
  return m;
}

void AppendMfccBlock(const AudioBuffer& buffer, std::vector<double>& out) {
  const Eigen::MatrixXd m = Mfcc(buffer, FrameSpec{25.0, 10.0, Window::kHann}, {26, 12});
  std::vector<double> stds;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Eigen::VectorXd col = m.col(c);
    const Moments mo = MeanStd({col.data(), col.data() + col.size()});
    out.push_back(mo.mean);
    stds.push_back(mo.std);
  }
  out.insert(out.end(), stds.begin(), stds.end());
}

void CheckDuration(const AudioBuffer& buffer) {
  buffer.Validate();
  if (buffer.DurationSeconds() < kMinDurationSeconds) {
    throw ValidationError("utterance shorter than 0.3 s");
  }
}

template <typename T>
void PutRaw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T GetRaw(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw IoError("truncated feature table");
  return v;
}

}  // namespace

std::string_view ToString(FeatureSet set) {
  return set == FeatureSet::kEgemapsSubset ? "egemaps_subset" : "mfcc_functionals";
}

FeatureSet ParseFeatureSet(std::string_view name) {
  if (name == "egemaps_subset" || name == "egemaps") return FeatureSet::kEgemapsSubset;
  if (name == "mfcc_functionals" || name == "mfcc") return FeatureSet::kMfccFunctionals;
  throw ValidationError("unknown feature set: " + std::string(name));
}

std::size_t FeatureDimension(FeatureSet set) {
  return set == FeatureSet::kEgemapsSubset ? kEgemapsDim : kMfccFunctionalsDim;
}

std::vector<std::string> FeatureNames(FeatureSet set) {
  std::vector<std::string> names;
  if (set == FeatureSet::kEgemapsSubset) {
    names = {"logf0_mean", "logf0_std", "logf0_p20", "logf0_p50", "logf0_p80",
             "logf0_range_p20_p80", "voiced_fraction", "rms_db_mean", "rms_db_std",
             "rms_db_p20", "rms_db_p50", "rms_db_p80", "centroid_mean", "centroid_std",
             "rolloff85_mean", "rolloff85_std", "zcr_mean", "zcr_std"};
  }
  for (int c = 1; c <= 12; ++c) names.push_back("mfcc" + std::to_string(c) + "_mean");
  for (int c = 1; c <= 12; ++c) names.push_back("mfcc" + std::to_string(c) + "_std");
  return names;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - lo;
  return values[lo] + frac * (values[hi] - values[lo]);
}

FeatureVector ExtractFeatures(const AudioBuffer& buffer, const F0Track& f0,
                              FeatureSet set) {
  if (set == FeatureSet::kMfccFunctionals) return MfccFunctionals(buffer);
  CheckDuration(buffer);
  f0.Validate();

  FeatureVector fv;
  fv.feature_set = set;
  std::vector<double>& out = fv.values;
  out.reserve(kEgemapsDim);

  std::vector<double> logf0;
  for (std::size_t t = 0; t < f0.size(); ++t) {
    if (f0.voiced[t]) logf0.push_back(std::log(f0.f0_hz[t]));
  }
  if (logf0.empty()) {
    out.insert(out.end(), 6, 0.0);
  } else {
    const Moments m = MeanStd(logf0);
    const double p20 = Percentile(logf0, 0.2);
    const double p80 = Percentile(logf0, 0.8);
    out.insert(out.end(), {m.mean, m.std, p20, Percentile(logf0, 0.5), p80, p80 - p20});
  }
  out.push_back(f0.VoicedFraction());

  const auto frames = FrameSignal(buffer, FrameSpec{25.0, 10.0, Window::kRectangular});
  std::vector<double> rms, centroid, rolloff, zcr;
  for (const auto& frame : frames) {
    const SpectralStats st = ComputeSpectralStats(frame, buffer.sample_rate);
    rms.push_back(st.rms_db);
    centroid.push_back(st.centroid_hz);
    rolloff.push_back(st.rolloff85_hz);
    zcr.push_back(st.zcr);
  }
  const Moments rm = MeanStd(rms);
  out.insert(out.end(), {rm.mean, rm.std, Percentile(rms, 0.2), Percentile(rms, 0.5),
                         Percentile(rms, 0.8)});
  for (const auto* v : {&centroid, &rolloff, &zcr}) {
    const Moments m = MeanStd(*v);
    out.push_back(m.mean);
    out.push_back(m.std);
  }
  AppendMfccBlock(buffer, out);
  return fv;
}

FeatureVector MfccFunctionals(const AudioBuffer& buffer) {
  CheckDuration(buffer);
  FeatureVector fv;
  fv.feature_set = FeatureSet::kMfccFunctionals;
  AppendMfccBlock(buffer, fv.values);
  return fv;
}

void SaveFeatureTable(const FeatureTable& table, const std::filesystem::path& path) {
  const auto dim = static_cast<std::uint32_t>(FeatureDimension(table.feature_set));
  if (table.ids.size() != table.rows.size()) {
    throw ValidationError("feature table ids and rows differ in length");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write feature table " + path.string());
  out.write("VXFT", 4);
  PutRaw(out, FeatureTable::kFormatVersion);
  PutRaw(out, static_cast<std::uint32_t>(table.feature_set));
  PutRaw(out, table.pipeline_hash);
  PutRaw(out, static_cast<std::uint64_t>(table.rows.size()));
  PutRaw(out, dim);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].size() != dim) throw ValidationError("feature row dimension mismatch");
    PutRaw(out, static_cast<std::uint32_t>(table.ids[i].size()));
    out.write(table.ids[i].data(), static_cast<std::streamsize>(table.ids[i].size()));
    out.write(reinterpret_cast<const char*>(table.rows[i].data()),
              static_cast<std::streamsize>(dim * sizeof(double)));
  }
  if (!out) throw IoError("write failed for feature table " + path.string());
}

FeatureTable LoadFeatureTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature table " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VXFT", 4) != 0) {
    throw IoError("not a feature table: " + path.string());
  }
  if (GetRaw<std::uint32_t>(in) != FeatureTable::kFormatVersion) {
    throw IoError("unsupported feature table version: " + path.string());
  }
  FeatureTable table;
  const auto set = GetRaw<std::uint32_t>(in);
  if (set > 1) throw IoError("unknown feature set in " + path.string());
  table.feature_set = static_cast<FeatureSet>(set);
  table.pipeline_hash = GetRaw<std::uint64_t>(in);
  const auto n_rows = GetRaw<std::uint64_t>(in);
  const auto dim = GetRaw<std::uint32_t>(in);
  if (dim != FeatureDimension(table.feature_set)) {
    throw IoError("feature dimension mismatch in " + path.string());
  }
  for (std::uint64_t r = 0; r < n_rows; ++r) {
    const auto id_len = GetRaw<std::uint32_t>(in);
    std::string id(id_len, '\0');
    in.read(id.data(), id_len);
    std::vector<double> row(dim);
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(dim * sizeof(double)));
    if (!in) throw IoError("truncated feature table " + path.string());
    table.ids.push_back(std::move(id));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace voxanon
