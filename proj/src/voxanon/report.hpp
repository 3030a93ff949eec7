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

// Report rendering. The JSON document is the single source of truth; text
// and CSV are rendered from it so every format shows the same numbers.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "voxanon/experiment.hpp"

namespace voxanon {

enum class ReportFormat { kText, kJson, kCsv };

std::vector<ReportFormat> ParseReportFormats(std::string_view list);

// Percentages are rounded to two decimals before they are stored.
double RoundPercent(double percent);

// One row per compared metric: original vs anonymized and the relative
// change, with the sign chosen so that positive means worse utility.
struct SummaryRow {
  std::string metric;
  double original = 0.0;
  double anonymized = 0.0;
  bool higher_is_better = true;
};

nlohmann::ordered_json SummaryRowToJson(const SummaryRow& row);

nlohmann::ordered_json ReportToJson(const ExperimentReport& report);

std::string RenderText(const nlohmann::ordered_json& report);
std::string RenderCsv(const nlohmann::ordered_json& report);

// Writes report.{json,txt,csv} under out_dir; returns the written paths.
std::vector<std::filesystem::path> EmitReport(const nlohmann::ordered_json& report,
                                              const std::filesystem::path& out_dir,
                                              const std::vector<ReportFormat>& formats);

nlohmann::ordered_json LoadReportJson(const std::filesystem::path& path);

}  // namespace voxanon
