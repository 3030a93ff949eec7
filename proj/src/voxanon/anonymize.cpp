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

#include "voxanon/anonymize.hpp"

#include <fstream>

#include "json.hpp"
#include "voxanon/common.hpp"

namespace voxanon {

using nlohmann::json;

void AnonymizationConfig::Validate() const {
  if (flags.random_warp && !flags.linear_transform) {
    throw ValidationError("random F0 warping is applied after the linear transform; "
                          "enable the linear transform as well");
  }
  warp.Validate();
  synth.Validate();
  if (pseudo.n_sel < 1 || pseudo.n_sel > pseudo.n_far) {
    throw ValidationError("pseudo-speaker requires 1 <= n_sel <= n_far");
  }
}

namespace {

json StatsJson(const SpeakerF0Stats& s) {
  return {{"mu_log", s.mu_log}, {"sigma_log", s.sigma_log}, {"n_frames", s.n_frames}};
}

struct SpeakerWork {
  std::string speaker_id;
  std::vector<std::size_t> members;  // indices into entries
};

}  // namespace

AnonymizationResult AnonymizeCorpus(const std::vector<ManifestEntry>& entries,
                                    const EmbeddingPool& pool,
                                    const AnonymizationConfig& cfg,
                                    const std::filesystem::path& out_dir) {
  cfg.Validate();
  std::filesystem::create_directories(out_dir / "wav");
  const std::size_t n = entries.size();

  std::vector<std::optional<F0Track>> tracks(n);
  std::vector<std::string> failure(n);
  ParallelFor(n, cfg.jobs, [&](std::size_t i) {
    try {
      tracks[i] = ExtractF0(ReadWav(entries[i].path), cfg.pitch);
    } catch (const std::exception& e) {
      failure[i] = e.what();
    }
  });

  std::map<std::string, std::size_t> speaker_index;
  std::vector<SpeakerWork> speakers;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = speaker_index.emplace(entries[i].speaker_id, speakers.size());
    if (inserted) speakers.push_back({entries[i].speaker_id, {}});
    speakers[it->second].members.push_back(i);
  }

  struct SpeakerState {
    SpeakerProvenance prov;
    SpeakerEmbedding embedding;
    std::string error;
  };
  std::vector<SpeakerState> state(speakers.size());
  ParallelFor(speakers.size(), cfg.jobs, [&](std::size_t s) {
    SpeakerState& st = state[s];
    st.prov.speaker_id = speakers[s].speaker_id;
    try {
      std::vector<AudioBuffer> audio;
      std::vector<F0Track> sp_tracks;
      for (std::size_t i : speakers[s].members) {
        if (!tracks[i]) continue;
        audio.push_back(ReadWav(entries[i].path));
        sp_tracks.push_back(*tracks[i]);
      }
      if (audio.empty()) throw ValidationError("no readable utterances");
      st.prov.source_stats = ComputeSpeakerStats(sp_tracks);
      st.prov.degenerate_f0 = st.prov.source_stats.sigma_log == 0.0;
      st.embedding = ExtractEmbedding(audio, sp_tracks, speakers[s].speaker_id);
      if (cfg.scope == PseudoSpeakerScope::kPerSpeaker) {
        st.prov.pseudo = DerivePseudoSpeaker(st.embedding, pool, cfg.pseudo,
                                             DeriveSeed(cfg.seed, "pseudo:" + st.prov.speaker_id));
        st.prov.mcadams_coefficient = McAdamsCoefficientFor(*st.prov.pseudo, cfg.synth);
      }
    } catch (const std::exception& e) {
      st.error = e.what();
    }
  });

  std::vector<std::optional<UtteranceProvenance>> prov(n);
  ParallelFor(n, cfg.jobs, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    if (!tracks[i]) return;
    const SpeakerState& st = state[speaker_index.at(e.speaker_id)];
    if (!st.error.empty()) {
      failure[i] = "speaker " + e.speaker_id + ": " + st.error;
      return;
    }
    try {
      UtteranceProvenance up;
      up.id = e.id;
      up.speaker_id = e.speaker_id;
      up.steps.push_back("extract_f0");
      PseudoSpeaker pseudo = st.prov.pseudo
                                 ? *st.prov.pseudo
                                 : DerivePseudoSpeaker(st.embedding, pool, cfg.pseudo,
                                                       DeriveSeed(cfg.seed, "pseudo:" + e.id));
      F0Track target = *tracks[i];
      if (cfg.flags.linear_transform) {
        LinearTransformOptions lt;
        lt.unit_ratio_if_degenerate = true;
        target = LinearTransform(target, st.prov.source_stats, pseudo.f0_stats, lt);
        up.steps.push_back("linear_transform");
      }
      if (cfg.flags.random_warp) {
        if (target.VoicedCount() > 0) {
          RandomStream rng(DeriveSeed(cfg.seed, "warp:" + e.id));
          WarpResult w = RandomWarp(target, cfg.warp, rng);
          target = std::move(w.track);
          up.alpha = w.alpha;
          up.n_clamped = w.n_clamped;
          up.steps.push_back("random_warp");
        } else {
          up.steps.push_back("random_warp_skipped_unvoiced");
        }
      }
      const AudioBuffer source = ReadWav(e.path);
      SynthTrace trace;
      const AudioBuffer out = Synthesize(source, target, pseudo, cfg.synth,
                                         DeriveSeed(cfg.seed, "noise:" + e.id), &trace);
      up.steps.push_back("synthesize");
      up.mcadams_coefficient = trace.mcadams_coefficient;
      up.pseudo_ids = pseudo.selected_ids;
      WriteWav(out, out_dir / "wav" / (e.id + ".wav"));
      prov[i] = std::move(up);
    } catch (const std::exception& ex) {
      failure[i] = ex.what();
    }
  });

  AnonymizationResult result;
  for (const SpeakerState& st : state) result.speakers.push_back(st.prov);
  for (std::size_t i = 0; i < n; ++i) {
    if (prov[i]) {
      ManifestEntry out = entries[i];
      out.path = out_dir / "wav" / (entries[i].id + ".wav");
      result.entries.push_back(std::move(out));
      result.utterances.push_back(std::move(*prov[i]));
    } else {
      result.errors.push_back({entries[i].id, failure[i]});
    }
  }

  SaveManifest(result.entries, out_dir / "manifest.jsonl");

  std::ofstream log(out_dir / "anonymization_log.jsonl", std::ios::trunc);
  if (!log) throw IoError("cannot write anonymization log in " + out_dir.string());
  log << json{{"type", "config"},
              {"seed", cfg.seed},
              {"f0_linear", cfg.flags.linear_transform},
              {"f0_warp", cfg.flags.random_warp},
              {"n_far", cfg.pseudo.n_far},
              {"n_sel", cfg.pseudo.n_sel},
              {"pseudo_scope", cfg.scope == PseudoSpeakerScope::kPerSpeaker ? "speaker" : "utterance"},
              {"alpha_range", {cfg.warp.alpha_min, cfg.warp.alpha_max}},
              {"mcadams_range", {cfg.synth.mcadams_min, cfg.synth.mcadams_max}},
              {"lpc_order", cfg.synth.lpc_order}}
             .dump()
      << '\n';
  for (const SpeakerProvenance& sp : result.speakers) {
    json j = {{"type", "speaker"},
              {"speaker_id", sp.speaker_id},
              {"source_f0", StatsJson(sp.source_stats)},
              {"degenerate_f0", sp.degenerate_f0}};
    if (sp.pseudo) {
      j["pseudo"] = {{"selected_ids", sp.pseudo->selected_ids},
                     {"f0", StatsJson(sp.pseudo->f0_stats)},
                     {"seed", sp.pseudo->seed}};
      j["mcadams"] = sp.mcadams_coefficient;
    }
    log << j.dump() << '\n';
  }
  for (const UtteranceProvenance& up : result.utterances) {
    json j = {{"type", "utterance"},
              {"id", up.id},
              {"speaker_id", up.speaker_id},
              {"steps", up.steps},
              {"alpha", up.alpha ? json(*up.alpha) : json(nullptr)},
              {"n_clamped", up.n_clamped},
              {"mcadams", up.mcadams_coefficient}};
    if (cfg.scope == PseudoSpeakerScope::kPerUtterance) j["pseudo_ids"] = up.pseudo_ids;
    log << j.dump() << '\n';
  }

  const auto err_path = out_dir / "errors.jsonl";
  if (!result.errors.empty()) {
    std::ofstream err(err_path, std::ios::trunc);
    for (const EntryError& e : result.errors) {
      err << json{{"id", e.id}, {"error", e.message}}.dump() << '\n';
    }
  } else {
    std::filesystem::remove(err_path);
  }
  return result;
}

}  // namespace voxanon
