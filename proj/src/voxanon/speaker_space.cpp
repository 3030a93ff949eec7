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

#include "voxanon/speaker_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>

#include "json.hpp"

#include "voxanon/common.hpp"

namespace voxanon {

using nlohmann::json;

SpeakerEmbedding ExtractEmbedding(std::span<const AudioBuffer> utterances,
                                  const std::string& speaker_id,
                                  const EmbeddingOptions& opts) {
  std::vector<F0Track> tracks;
  tracks.reserve(utterances.size());
  for (const AudioBuffer& b : utterances) tracks.push_back(ExtractF0(b, opts.pitch));
  return ExtractEmbedding(utterances, tracks, speaker_id, opts);
}

SpeakerEmbedding ExtractEmbedding(std::span<const AudioBuffer> utterances,
                                  std::span<const F0Track> tracks,
                                  const std::string& speaker_id,
                                  const EmbeddingOptions& opts) {
  if (utterances.empty()) throw ValidationError("no utterances for embedding");
  if (tracks.size() != utterances.size()) {
    throw ValidationError("one F0 track per utterance required");
  }
  double voiced_s = 0.0;
  for (const F0Track& t : tracks) voiced_s += t.VoicedCount() * t.hop_ms / 1000.0;
  if (voiced_s < opts.min_voiced_seconds) {
    throw ValidationError("insufficient voiced audio for embedding (" +
                          std::to_string(voiced_s) + " s)");
  }

  const FrameSpec spec{25.0, 10.0, Window::kHann};
  std::vector<std::vector<double>> columns(kEmbeddingCoeffs);
  for (const AudioBuffer& b : utterances) {
    const Eigen::MatrixXd m = Mfcc(b, spec, {26, kEmbeddingCoeffs});
    for (int c = 0; c < kEmbeddingCoeffs; ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) columns[c].push_back(m(r, c));
    }
  }

  // Sorting each column before summation makes the statistics independent of
  // utterance order down to the last bit.
  SpeakerEmbedding emb;
  emb.speaker_id = speaker_id;
  emb.vector.assign(kEmbeddingDim, 0.0);
  for (int c = 0; c < kEmbeddingCoeffs; ++c) {
    std::vector<double>& col = columns[c];
    std::sort(col.begin(), col.end());
    double sum = 0.0;
    for (double v : col) sum += v;
    const double mean = sum / col.size();
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    emb.vector[c] = mean;
    emb.vector[kEmbeddingCoeffs + c] = std::sqrt(ss / col.size());
  }
  NormalizeL2(emb.vector);
  return emb;
}

void NormalizeL2(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw ValidationError("cannot normalize a zero vector");
  for (double& x : v) x /= n;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw ValidationError("cosine distance of a zero vector");
  }
  const double cos = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return 1.0 - cos;
}

void EmbeddingPool::Add(PoolEntry entry) {
  if (entry.embedding.empty()) throw ValidationError("empty pool embedding");
  if (dimension_ == 0) {
    dimension_ = entry.embedding.size();
  } else if (entry.embedding.size() != dimension_) {
    throw ValidationError("pool embedding dimension mismatch for " + entry.speaker_id);
  }
  for (const PoolEntry& e : entries_) {
    if (e.speaker_id == entry.speaker_id) {
      throw ValidationError("duplicate pool speaker id: " + entry.speaker_id);
    }
  }
  entries_.push_back(std::move(entry));
}

void EmbeddingPool::Save(const std::filesystem::path& path) const {
  json j;
  j["format"] = "voxanon-pool";
  j["version"] = kFormatVersion;
  j["dimension"] = dimension_;
  j["entries"] = json::array();
  for (const PoolEntry& e : entries_) {
    j["entries"].push_back({{"speaker_id", e.speaker_id},
                            {"embedding", e.embedding},
                            {"f0", {{"mu_log", e.f0_stats.mu_log},
                                    {"sigma_log", e.f0_stats.sigma_log},
                                    {"n_frames", e.f0_stats.n_frames}}}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write pool file " + path.string());
  out << j.dump() << '\n';
  if (!out) throw IoError("write failed for pool file " + path.string());
}

EmbeddingPool EmbeddingPool::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pool file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed pool file " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "voxanon-pool") {
    throw IoError("not a pool file: " + path.string());
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw IoError("unsupported pool version in " + path.string());
  }
  EmbeddingPool pool;
  try {
    const std::size_t dim = j.at("dimension").get<std::size_t>();
    for (const json& e : j.at("entries")) {
      PoolEntry entry;
      entry.speaker_id = e.at("speaker_id").get<std::string>();
      entry.embedding = e.at("embedding").get<std::vector<double>>();
      if (entry.embedding.size() != dim) {
        throw ValidationError("embedding dimension disagrees with header for " +
                              entry.speaker_id);
      }
      const json& f0 = e.at("f0");
      entry.f0_stats.mu_log = f0.at("mu_log").get<double>();
      entry.f0_stats.sigma_log = f0.at("sigma_log").get<double>();
      entry.f0_stats.n_frames = f0.at("n_frames").get<std::size_t>();
      entry.f0_stats.Validate();
      pool.Add(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed pool file " + path.string() + ": " + e.what());
  }
  return pool;
}

std::vector<std::size_t> RankByDistance(const SpeakerEmbedding& source,
                                        const EmbeddingPool& pool) {
  struct Candidate {
    std::size_t index;
    double distance;
  };
  std::vector<Candidate> cands;
  cands.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PoolEntry& e = pool.entries()[i];
    if (!source.speaker_id.empty() && e.speaker_id == source.speaker_id) continue;
    cands.push_back({i, CosineDistance(source.vector, e.embedding)});
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return pool.entries()[a.index].speaker_id < pool.entries()[b.index].speaker_id;
  });
  std::vector<std::size_t> order;
  order.reserve(cands.size());
  for (const Candidate& c : cands) order.push_back(c.index);
  return order;
}

PseudoSpeaker DerivePseudoSpeaker(const SpeakerEmbedding& source,
                                  const EmbeddingPool& pool,
                                  const PseudoSpeakerOptions& opts,
                                  std::uint64_t seed) {
  if (opts.n_sel < 1 || opts.n_sel > opts.n_far) {
    throw ValidationError("pseudo-speaker requires 1 <= n_sel <= n_far");
  }
  if (pool.dimension() != source.vector.size()) {
    throw ValidationError("source embedding dimension does not match pool");
  }
  const std::vector<std::size_t> ranked = RankByDistance(source, pool);
  if (ranked.size() < opts.n_far) {
    throw ValidationError("pool has " + std::to_string(ranked.size()) +
                          " candidates, fewer than n_far = " +
                          std::to_string(opts.n_far));
  }
  RandomStream rng(seed);
  const std::vector<std::size_t> draws =
      SampleWithoutReplacement(opts.n_far, opts.n_sel, rng);

  std::vector<const PoolEntry*> chosen;
  chosen.reserve(draws.size());
  for (std::size_t d : draws) chosen.push_back(&pool.entries()[ranked[d]]);
  std::sort(chosen.begin(), chosen.end(), [](const PoolEntry* a, const PoolEntry* b) {
    return a->speaker_id < b->speaker_id;
  });

  PseudoSpeaker ps;
  ps.seed = seed;
  ps.embedding.assign(pool.dimension(), 0.0);
  std::vector<SpeakerF0Stats> stats;
  stats.reserve(chosen.size());
  for (const PoolEntry* e : chosen) {
    ps.selected_ids.push_back(e->speaker_id);
    for (std::size_t k = 0; k < ps.embedding.size(); ++k) ps.embedding[k] += e->embedding[k];
    stats.push_back(e->f0_stats);
  }
  for (double& x : ps.embedding) x /= static_cast<double>(chosen.size());
  NormalizeL2(ps.embedding);
  ps.f0_stats = PseudoF0Stats(stats);
  return ps;
}

EmbeddingPool BuildPool(const std::vector<SpeakerAudio>& speakers, int jobs,
                        std::vector<PoolBuildError>* errors,
                        const EmbeddingOptions& opts) {
  std::set<std::string> seen;
  for (const SpeakerAudio& s : speakers) {
    if (!seen.insert(s.speaker_id).second) {
      throw ValidationError("duplicate speaker id in pool manifest: " + s.speaker_id);
    }
  }

  std::vector<std::optional<PoolEntry>> results(speakers.size());
  std::vector<std::string> failures(speakers.size());
  ParallelFor(speakers.size(), jobs, [&](std::size_t i) {
    const SpeakerAudio& s = speakers[i];
    try {
      std::vector<AudioBuffer> audio;
      std::vector<F0Track> tracks;
      for (const auto& p : s.paths) {
        audio.push_back(ReadWav(p));
        tracks.push_back(ExtractF0(audio.back(), opts.pitch));
      }
      PoolEntry entry;
      entry.speaker_id = s.speaker_id;
      entry.f0_stats = ComputeSpeakerStats(tracks);
      entry.embedding = ExtractEmbedding(audio, tracks, s.speaker_id, opts).vector;
      results[i] = std::move(entry);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  EmbeddingPool pool;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    if (results[i]) {
      pool.Add(std::move(*results[i]));
    } else if (errors != nullptr) {
      errors->push_back({speakers[i].speaker_id, failures[i]});
    }
  }
  return pool;
}

}  // namespace voxanon
