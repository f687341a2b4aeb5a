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

#ifndef AVERC_REPORT_HPP
#define AVERC_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "averc/dataset.hpp"

namespace averc {

/// Implicit baseline system: the ASR 1-best passed through unchanged.
inline const std::string kAsrBaselineName = "asr-1best";

/// System outputs keyed by record id (normalized transcripts).
using SystemOutputs = std::unordered_map<std::string, TokenSequence>;

struct EvalOptions {
  std::string group_by;  // tag key; empty = single "all" group
  std::string baseline = kAsrBaselineName;
  bool per_utterance_mean = false;  // corpus-weighted WER is the default
};

struct GroupReport {
  std::string group;
  long long records = 0;
  // System name -> accumulated WER. Insertion order preserved via map.
  std::map<std::string, CorpusWerAccum> systems;
  OracleTable oracles;
};

struct EvalReport {
  std::vector<GroupReport> groups;  // per-group rows, then Overall last
  std::string baseline;
  bool per_utterance_mean = false;
  long long evaluated = 0;
  long long skipped = 0;
  std::vector<std::string> skipped_ids;

  double system_wer(const GroupReport& g, const std::string& system) const;
  /// WERR = (baseline - system) / baseline on the group's corpus WER.
  std::optional<double> werr(const GroupReport& g,
                             const std::string& system) const;
};

/// Evaluate every system over the dataset. A record is skipped (counted,
/// not fatal) when its reference is empty or a system output is missing.
EvalReport run_eval(
    const std::vector<DualRecord>& records,
    const std::map<std::string, SystemOutputs>& systems,
    const EvalOptions& opts);

/// WERR per SNR bucket; buckets with no records are omitted. Records must
/// carry an SNR (audio corruption metadata or an "snr_db" tag).
std::vector<std::pair<double, double>> werr_curve(
    const std::vector<DualRecord>& records, const SystemOutputs& system,
    const SystemOutputs& baseline, const std::vector<double>& snr_buckets);

/// "13.2 (-48.8%)" style cell; no parenthetical for the baseline.
std::string format_wer_cell(double wer, std::optional<double> werr);

std::string emit_markdown(const EvalReport& report);
std::string emit_csv(const EvalReport& report);

/// Result file: one JSON object per line {"id","backend","output"}.
void save_results(const std::string& path, const std::string& backend,
                  const std::vector<std::pair<std::string, std::string>>&
                      id_and_output);
std::pair<std::string, SystemOutputs> load_results(const std::string& path);

}  // namespace averc

#endif  // AVERC_REPORT_HPP
