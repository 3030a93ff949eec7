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

#include "voxanon/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"

namespace voxanon {

using nlohmann::json;

namespace {

struct RawLabel {
  std::string_view name;
  std::optional<Emotion> canonical;
};

constexpr RawLabel kVocabulary[] = {
    {"neutral", Emotion::kNeutral},      {"neu", Emotion::kNeutral},
    {"frustration", Emotion::kFrustration}, {"fru", Emotion::kFrustration},
    {"sadness", Emotion::kSadness},      {"sad", Emotion::kSadness},
    {"anger", Emotion::kAnger},          {"ang", Emotion::kAnger},
    {"happiness", Emotion::kHappiness},  {"hap", Emotion::kHappiness},
    {"excitement", Emotion::kHappiness}, {"exc", Emotion::kHappiness},
    {"surprise", std::nullopt},          {"sur", std::nullopt},
    {"fear", std::nullopt},              {"fea", std::nullopt},
    {"disgust", std::nullopt},           {"dis", std::nullopt},
    {"other", std::nullopt},             {"oth", std::nullopt},
    {"xxx", std::nullopt},
};

const RawLabel* FindLabel(std::string_view raw) {
  for (const RawLabel& l : kVocabulary) {
    if (l.name == raw) return &l;
  }
  return nullptr;
}

const std::set<std::string> kKnownFields = {"id", "path", "speaker_id", "session_id",
                                            "emotion", "transcript", "overlap_ratio"};

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string msg = "manifest invalid:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

std::string_view ToString(Emotion e) {
  switch (e) {
    case Emotion::kNeutral: return "neutral";
    case Emotion::kFrustration: return "frustration";
    case Emotion::kSadness: return "sadness";
    case Emotion::kAnger: return "anger";
    case Emotion::kHappiness: return "happiness";
  }
  return "unknown";
}

bool IsKnownRawLabel(std::string_view raw) { return FindLabel(raw) != nullptr; }

std::optional<Emotion> CanonicalEmotion(std::string_view raw) {
  const RawLabel* l = FindLabel(raw);
  return l ? l->canonical : std::nullopt;
}

ManifestError::ManifestError(std::vector<std::string> problems)
    : ValidationError(JoinProblems(problems)), problems_(std::move(problems)) {}

std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path,
                                        std::vector<std::string>* warnings,
                                        const ManifestLoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestEntry> entries;
  std::vector<std::string> problems;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      problems.push_back(where + ": malformed JSON");
      continue;
    }
    if (!j.is_object()) {
      problems.push_back(where + ": entry is not an object");
      continue;
    }
    ManifestEntry e;
    bool ok = true;
    for (const char* field : {"id", "path", "speaker_id", "session_id", "emotion"}) {
      if (!j.contains(field) || !j[field].is_string()) {
        problems.push_back(where + ": missing required string field '" + field + "'");
        ok = false;
      }
    }
    if (!ok) continue;
    e.id = j["id"].get<std::string>();
    e.speaker_id = j["speaker_id"].get<std::string>();
    e.session_id = j["session_id"].get<std::string>();
    e.emotion = j["emotion"].get<std::string>();
    e.path = j["path"].get<std::string>();
    if (e.path.is_relative()) e.path = base / e.path;
    if (j.contains("transcript") && !j["transcript"].is_null()) {
      if (!j["transcript"].is_string()) {
        problems.push_back(where + ": transcript must be a string");
        continue;
      }
      e.transcript = j["transcript"].get<std::string>();
    }
    if (j.contains("overlap_ratio") && !j["overlap_ratio"].is_null()) {
      if (!j["overlap_ratio"].is_number()) {
        problems.push_back(where + ": overlap_ratio must be a number");
        continue;
      }
      const double r = j["overlap_ratio"].get<double>();
      if (r < 0.0 || r > 1.0) {
        problems.push_back(where + ": overlap_ratio outside [0, 1] for " + e.id);
        continue;
      }
      e.overlap_ratio = r;
    }
    if (warnings != nullptr) {
      for (const auto& [key, value] : j.items()) {
        if (!kKnownFields.count(key)) {
          warnings->push_back(where + ": ignoring unknown field '" + key + "'");
        }
      }
    }
    if (!ids.insert(e.id).second) {
      problems.push_back(where + ": duplicate id '" + e.id + "'");
      continue;
    }
    if (opts.check_audio) {
      std::ifstream probe(e.path, std::ios::binary);
      if (!probe) {
        problems.push_back(where + ": unreadable audio for '" + e.id + "': " + e.path.string());
        continue;
      }
    }
    entries.push_back(std::move(e));
  }
  if (!problems.empty()) throw ManifestError(std::move(problems));
  return entries;
}

void SaveManifest(const std::vector<ManifestEntry>& entries,
                  const std::filesystem::path& path) {
  const std::filesystem::path base =
      std::filesystem::weakly_canonical(std::filesystem::absolute(path).parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const ManifestEntry& e : entries) {
    std::filesystem::path p = e.path;
    const auto abs = std::filesystem::weakly_canonical(std::filesystem::absolute(p));
    const auto rel = abs.lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") p = rel;
    json j = {{"id", e.id},
              {"path", p.generic_string()},
              {"speaker_id", e.speaker_id},
              {"session_id", e.session_id},
              {"emotion", e.emotion}};
    if (e.transcript) j["transcript"] = *e.transcript;
    if (e.overlap_ratio) j["overlap_ratio"] = *e.overlap_ratio;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed for manifest " + path.string());
}

LabelMapping MapLabels(const std::vector<ManifestEntry>& entries, bool strict) {
  LabelMapping m;
  for (const ManifestEntry& e : entries) {
    const RawLabel* l = FindLabel(e.emotion);
    if (l == nullptr) {
      if (strict) {
        throw ValidationError("unknown emotion label '" + e.emotion + "' for " + e.id);
      }
      m.warnings.push_back("unknown emotion label '" + e.emotion + "' for " + e.id +
                           "; entry dropped");
      ++m.dropped[e.emotion];
      continue;
    }
    if (!l->canonical) {
      ++m.dropped[e.emotion];
      continue;
    }
    m.entries.push_back({e, *l->canonical});
  }
  return m;
}

std::vector<Fold> SplitLoso(const std::vector<LabeledEntry>& entries) {
  std::set<std::string> sessions;
  std::set<Emotion> global_classes;
  std::map<std::string, std::string> speaker_session;
  for (const LabeledEntry& le : entries) {
    sessions.insert(le.entry.session_id);
    global_classes.insert(le.label);
    auto [it, inserted] = speaker_session.emplace(le.entry.speaker_id, le.entry.session_id);
    if (!inserted && it->second != le.entry.session_id) {
      throw ValidationError("speaker '" + le.entry.speaker_id + "' appears in sessions '" +
                            it->second + "' and '" + le.entry.session_id +
                            "'; leave-one-session-out would leak speakers across folds");
    }
  }
  if (sessions.size() < 2) {
    throw ValidationError("leave-one-session-out needs at least two sessions");
  }

  std::vector<Fold> folds;
  for (const std::string& s : sessions) {
    Fold f;
    f.session_id = s;
    std::set<Emotion> present;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].entry.session_id == s) {
        f.test.push_back(i);
        present.insert(entries[i].label);
      } else {
        f.train.push_back(i);
      }
    }
    for (Emotion e : global_classes) {
      if (!present.count(e)) {
        throw ValidationError("session '" + s + "' has no instance of class '" +
                              std::string(ToString(e)) + "'");
      }
    }
    folds.push_back(std::move(f));
  }
  return folds;
}

}  // namespace voxanon
