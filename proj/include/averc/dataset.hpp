// Copyright 2026 The averc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AVERC_DATASET_HPP
#define AVERC_DATASET_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "averc/corruption.hpp"
#include "averc/oracle.hpp"
#include "averc/relmask.hpp"

namespace averc {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultNBest = 5;

/// One utterance: reference, both N-best lists, corruption metadata,
/// optional masks, and free-form condition tags.
struct DualRecord {
  std::string id;
  std::string reference;
  DualHypotheses hyps;
  double duration_s = 0.0;
  std::optional<CorruptionSpec> audio_corruption;
  std::optional<CorruptionSpec> video_corruption;
  std::optional<ReliabilityMask> audio_mask;
  std::optional<ReliabilityMask> video_mask;
  std::map<std::string, std::string> tags;

  TokenSequence ref_tokens() const { return normalize(reference); }
};

struct LoadOptions {
  int max_nbest = kDefaultNBest;  // entries per stream allowed per record
};

/// Line-delimited JSON, one record per line. Validation errors carry the
/// line number and field path; duplicate ids are rejected.
std::vector<DualRecord> load_dataset(const std::string& path,
                                     const LoadOptions& opts = {});

/// Canonical single-line serialization; load(serialize(r)) round-trips.
std::string serialize_record(const DualRecord& record);

void save_dataset(const std::string& path,
                  const std::vector<DualRecord>& records);

/// If the list is shorter than n, append uniform-random draws (with
/// replacement) of existing entries until it has n.
NBestList pad_nbest(const NBestList& list, int n, Rng& rng);

}  // namespace averc

#endif  // AVERC_DATASET_HPP
