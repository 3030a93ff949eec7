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

#include "voxanon/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "voxanon/common.hpp"
#include "voxanon/eval.hpp"

namespace voxanon {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::vector<ReportFormat> ParseReportFormats(std::string_view list) {
  std::vector<ReportFormat> out;
  std::string item;
  std::istringstream in{std::string(list)};
  while (std::getline(in, item, ',')) {
    if (item == "text" || item == "txt") {
      out.push_back(ReportFormat::kText);
    } else if (item == "json") {
      out.push_back(ReportFormat::kJson);
    } else if (item == "csv") {
      out.push_back(ReportFormat::kCsv);
    } else {
      throw ValidationError("unknown report format '" + item + "' (expected text, json, csv)");
    }
  }
  if (out.empty()) throw ValidationError("no report format given");
  return out;
}

double RoundPercent(double percent) {
  const double r = std::round(percent * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // no negative zero in the output
}

ojson SummaryRowToJson(const SummaryRow& row) {
  const double diff = RelativeDegradation(row.original, row.anonymized, row.higher_is_better);
  ojson j;
  j["metric"] = row.metric;
  j["original_percent"] = RoundPercent(row.original);
  j["anonymized_percent"] = RoundPercent(row.anonymized);
  j["difference_percent"] = RoundPercent(diff);
  j["label"] = DegradationLabel(diff);
  return j;
}

namespace {

ojson ScenarioJson(const ScenarioResult& r, const ExperimentReport& report) {
  const bool anonymized_pipeline = r.scenario != Scenario::kBaseline;
  ojson j;
  j["scenario"] = std::string(ToString(r.scenario));
  j["f0_linear"] = anonymized_pipeline && report.config.value("f0_linear", false);
  j["f0_warp"] = anonymized_pipeline && report.config.value("f0_warp", false);
  j["training_data"] = r.scenario == Scenario::kInformed ? "anonymized" : "original";
  j["test_data"] = anonymized_pipeline ? "anonymized" : "original";
  j["n_test"] = r.confusion.Total();
  j["uar"] = r.uar;
  j["uar_percent"] = RoundPercent(100.0 * r.uar);
  j["ci"] = {{"method", "wilson"},
             {"level", 0.95},
             {"low_percent", RoundPercent(100.0 * r.ci.lo)},
             {"high_percent", RoundPercent(100.0 * r.ci.hi)}};
  if (r.degradation_pct) {
    j["degradation_percent"] = RoundPercent(*r.degradation_pct);
    j["degradation_label"] = DegradationLabel(*r.degradation_pct);
  } else {
    j["degradation_percent"] = nullptr;
    j["degradation_label"] = nullptr;
  }
  ojson cm = ojson::array();
  for (std::size_t t = 0; t < r.confusion.n_classes(); ++t) {
    ojson row = ojson::array();
    for (std::size_t p = 0; p < r.confusion.n_classes(); ++p) row.push_back(r.confusion.count(t, p));
    cm.push_back(row);
  }
  j["confusion"] = cm;
  ojson folds = ojson::array();
  for (const FoldScore& f : r.folds) {
    folds.push_back({{"session", f.session_id},
                     {"n_test", f.n_test},
                     {"uar_percent", RoundPercent(100.0 * f.uar)}});
  }
  j["folds"] = folds;
  return j;
}

ojson WerJson(const WerResult& w) {
  return {{"wer_percent", RoundPercent(w.wer_percent)},
          {"substitutions", w.substitutions},
          {"deletions", w.deletions},
          {"insertions", w.insertions},
          {"n_ref_words", w.n_ref}};
}

}  // namespace

ojson ReportToJson(const ExperimentReport& report) {
  ojson j;
  j["format"] = "voxanon-report";
  j["version"] = 1;
  j["config"] = report.config;
  j["classes"] = report.class_names;
  j["n_utterances"] = report.n_utterances;
  ojson dropped = ojson::object();
  for (const auto& [label, count] : report.dropped_labels) dropped[label] = count;
  j["dropped_labels"] = dropped;

  ojson scenarios = ojson::array();
  const ScenarioResult* baseline = nullptr;
  const ScenarioResult* informed = nullptr;
  for (const ScenarioResult& r : report.scenarios) {
    scenarios.push_back(ScenarioJson(r, report));
    if (r.scenario == Scenario::kBaseline) baseline = &r;
    if (r.scenario == Scenario::kInformed) informed = &r;
  }
  j["scenarios"] = scenarios;

  if (report.eer) {
    j["eer"] = {{"original_percent", RoundPercent(100.0 * report.eer->original)},
                {"anonymized_percent", RoundPercent(100.0 * report.eer->anonymized)},
                {"n_target", report.eer->n_target},
                {"n_nontarget", report.eer->n_nontarget},
                {"n_excluded_utterances", report.eer->n_excluded},
                {"scoring", "cosine; enrollment original, test anonymized"}};
  } else {
    j["eer"] = nullptr;
  }

  ojson summary = ojson::array();
  if (report.wer) {
    ojson w;
    w["n_scored"] = report.wer->n_scored;
    w["n_missing_hypotheses"] = report.wer->n_missing_hyp;
    if (report.config.contains("hyp_original")) w["original"] = WerJson(report.wer->original);
    if (report.wer->anonymized) w["anonymized"] = WerJson(*report.wer->anonymized);
    j["wer"] = w;
    if (report.config.contains("hyp_original") && report.wer->anonymized &&
        report.wer->original.wer_percent > 0.0) {
      summary.push_back(SummaryRowToJson(
          {"WER", report.wer->original.wer_percent, report.wer->anonymized->wer_percent, false}));
    }
  } else {
    j["wer"] = nullptr;
  }
  if (baseline != nullptr && informed != nullptr && baseline->uar > 0.0) {
    summary.push_back(
        SummaryRowToJson({"UAR", 100.0 * baseline->uar, 100.0 * informed->uar, true}));
  }
  j["summary"] = summary;

  if (!report.strata.empty()) {
    ojson strata = ojson::array();
    for (const StratumResult& s : report.strata) {
      strata.push_back({{"scenario", std::string(ToString(s.scenario))},
                        {"overlap_ratio", s.bucket},
                        {"n", s.n},
                        {"uar_percent", RoundPercent(100.0 * s.uar_present)}});
    }
    j["overlap_strata"] = strata;
  }

  if (!report.alpha_log_file.empty()) {
    ojson entries = ojson::array();
    for (const auto& [id, alpha] : report.alpha_log) {
      entries.push_back({{"id", id}, {"alpha", alpha ? ojson(*alpha) : ojson(nullptr)}});
    }
    j["alpha_log"] = {{"file", report.alpha_log_file}, {"entries", entries}};
  }

  ojson errors = ojson::array();
  for (const EntryError& e : report.anonymization_errors) {
    errors.push_back({{"id", e.id}, {"message", e.message}});
  }
  j["anonymization_errors"] = errors;
  j["notes"] = report.notes;
  return j;
}

namespace {

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string Mark(bool b) { return b ? "x" : "-"; }

}  // namespace

std::string RenderText(const ojson& report) {
  std::ostringstream out;
  const ojson& cfg = report.at("config");
  out << "voxanon experiment report\n";
  out << "manifest " << cfg.at("manifest").at("file").get<std::string>() << " ("
      << report.at("n_utterances").get<std::size_t>() << " utterances, classes:";
  for (const auto& c : report.at("classes")) out << ' ' << c.get<std::string>();
  out << ")\n";
  out << "feature set " << cfg.at("feature_set").get<std::string>() << ", seed "
      << cfg.at("seed").get<std::uint64_t>() << ", pool " << cfg.at("pool").at("size").get<std::size_t>()
      << " speakers\n\n";

  out << "Emotion recognition (LOSO, pooled UAR, 95% Wilson interval)\n";
  const std::vector<std::size_t> w = {10, 10, 8, 14, 9, 18, 12};
  out << Pad("scenario", w[0]) << Pad("F0 linear", w[1]) << Pad("F0 warp", w[2])
      << Pad("training data", w[3]) << Pad("UAR [%]", w[4]) << Pad("95% CI", w[5])
      << "degradation\n";
  for (const auto& s : report.at("scenarios")) {
    const ojson& ci = s.at("ci");
    std::string deg = s.at("degradation_percent").is_null()
                          ? "-"
                          : Fixed(s.at("degradation_percent").get<double>()) + "%";
    out << Pad(s.at("scenario").get<std::string>(), w[0])
        << Pad(Mark(s.at("f0_linear").get<bool>()), w[1])
        << Pad(Mark(s.at("f0_warp").get<bool>()), w[2])
        << Pad(s.at("training_data").get<std::string>(), w[3])
        << Pad(Fixed(s.at("uar_percent").get<double>()), w[4])
        << Pad("[" + Fixed(ci.at("low_percent").get<double>()) + ", " +
                   Fixed(ci.at("high_percent").get<double>()) + "]",
               w[5])
        << deg << '\n';
  }

  out << "\nPer-fold UAR [%]\n";
  for (const auto& s : report.at("scenarios")) {
    out << Pad(s.at("scenario").get<std::string>(), w[0]);
    for (const auto& f : s.at("folds")) {
      out << ' ' << f.at("session").get<std::string>() << '='
          << Fixed(f.at("uar_percent").get<double>());
    }
    out << '\n';
  }

  if (!report.at("eer").is_null()) {
    const ojson& e = report.at("eer");
    out << "\nSpeaker verification EER [%]\n";
    out << "original " << Fixed(e.at("original_percent").get<double>()) << ", anonymized "
        << Fixed(e.at("anonymized_percent").get<double>()) << " ("
        << e.at("n_target").get<std::size_t>() << " target, "
        << e.at("n_nontarget").get<std::size_t>() << " non-target trials)\n";
  }

  if (!report.at("wer").is_null()) {
    const ojson& wer = report.at("wer");
    out << "\nWord error rate [%] over " << wer.at("n_scored").get<std::size_t>()
        << " utterances\n";
    for (const char* side : {"original", "anonymized"}) {
      if (!wer.contains(side)) continue;
      const ojson& r = wer.at(side);
      out << side << ' ' << Fixed(r.at("wer_percent").get<double>()) << " (S "
          << r.at("substitutions").get<std::size_t>() << ", D "
          << r.at("deletions").get<std::size_t>() << ", I "
          << r.at("insertions").get<std::size_t>() << ", N "
          << r.at("n_ref_words").get<std::size_t>() << ")\n";
    }
  }

  if (!report.at("summary").empty()) {
    out << "\nDifference anonymized / original\n";
    out << Pad("metric", 8) << Pad("original", 10) << Pad("anonymized", 12) << "difference\n";
    for (const auto& r : report.at("summary")) {
      out << Pad(r.at("metric").get<std::string>(), 8)
          << Pad(Fixed(r.at("original_percent").get<double>()), 10)
          << Pad(Fixed(r.at("anonymized_percent").get<double>()), 12)
          << r.at("label").get<std::string>() << '\n';
    }
  }

  if (report.contains("overlap_strata")) {
    out << "\nUAR [%] by overlap ratio (classes present in each bucket)\n";
    for (const auto& s : report.at("overlap_strata")) {
      out << Pad(s.at("scenario").get<std::string>(), w[0])
          << Pad(s.at("overlap_ratio").get<std::string>(), 12) << "n="
          << Pad(std::to_string(s.at("n").get<std::size_t>()), 6)
          << Fixed(s.at("uar_percent").get<double>()) << '\n';
    }
  }

  if (report.contains("alpha_log")) {
    out << "\nwarp factors and pseudo-speaker provenance: "
        << report.at("alpha_log").at("file").get<std::string>() << '\n';
  }
  if (!report.at("anonymization_errors").empty()) {
    out << "\n" << report.at("anonymization_errors").size()
        << " utterances failed anonymization; see anonymized/errors.jsonl\n";
  }
  if (!report.at("notes").empty()) {
    out << "\nnotes\n";
    for (const auto& n : report.at("notes")) out << "  " << n.get<std::string>() << '\n';
  }
  out << "\nconfig\n" << cfg.dump(2) << '\n';
  return out.str();
}

std::string RenderCsv(const ojson& report) {
  std::ostringstream out;
  out << std::boolalpha;
  out << "scenario,f0_linear,f0_warp,training_data,test_data,n_test,uar_percent,"
         "ci_low_percent,ci_high_percent,degradation_percent\n";
  for (const auto& s : report.at("scenarios")) {
    const ojson& ci = s.at("ci");
    out << s.at("scenario").get<std::string>() << ',' << s.at("f0_linear").get<bool>() << ','
        << s.at("f0_warp").get<bool>() << ',' << s.at("training_data").get<std::string>() << ','
        << s.at("test_data").get<std::string>() << ',' << s.at("n_test").get<std::size_t>()
        << ',' << Fixed(s.at("uar_percent").get<double>()) << ','
        << Fixed(ci.at("low_percent").get<double>()) << ','
        << Fixed(ci.at("high_percent").get<double>()) << ','
        << (s.at("degradation_percent").is_null()
                ? std::string()
                : Fixed(s.at("degradation_percent").get<double>()))
        << '\n';
  }
  return out.str();
}

std::vector<fs::path> EmitReport(const ojson& report, const fs::path& out_dir,
                                 const std::vector<ReportFormat>& formats) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (ReportFormat f : formats) {
    fs::path path;
    std::string body;
    switch (f) {
      case ReportFormat::kJson:
        path = out_dir / "report.json";
        body = report.dump(2) + "\n";
        break;
      case ReportFormat::kText:
        path = out_dir / "report.txt";
        body = RenderText(report);
        break;
      case ReportFormat::kCsv:
        path = out_dir / "report.csv";
        body = RenderCsv(report);
        break;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
    if (!out) throw IoError("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

ojson LoadReportJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report " + path.string());
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != "voxanon-report") {
    throw ValidationError(path.string() + " is not a voxanon report");
  }
  return j;
}

}  // namespace voxanon
