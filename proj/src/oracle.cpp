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

#include "averc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "averc/error.hpp"

namespace averc {

std::string modality_name(Modality m) {
  switch (m) {
    case Modality::ASR:
      return "asr";
    case Modality::VSR:
      return "vsr";
    case Modality::AVSR:
      return "avsr";
  }
  return "?";
}

std::vector<const NBestEntry*> DualHypotheses::all() const {
  std::vector<const NBestEntry*> out;
  out.reserve(asr.entries.size() + vsr.entries.size());
  for (const auto& e : asr.entries) out.push_back(&e);
  for (const auto& e : vsr.entries) out.push_back(&e);
  return out;
}

namespace {

std::vector<const NBestEntry*> view(const NBestList& list) {
  std::vector<const NBestEntry*> out;
  out.reserve(list.entries.size());
  for (const auto& e : list.entries) out.push_back(&e);
  return out;
}

}  // namespace

std::pair<int, double> oracle_nbest(
    const TokenSequence& ref, const std::vector<const NBestEntry*>& list) {
  if (list.empty()) throw EmptyList("oracle_nbest");
  if (ref.empty()) throw EmptyReference("oracle_nbest");
  int best = 0;
  double best_wer = wer(ref, list[0]->tokens);
  for (std::size_t i = 1; i < list.size(); ++i) {
    const double w = wer(ref, list[i]->tokens);
    if (w < best_wer) {
      best_wer = w;
      best = static_cast<int>(i);
    }
  }
  return {best, best_wer};
}

std::pair<int, double> oracle_nbest(const TokenSequence& ref,
                                    const NBestList& list) {
  return oracle_nbest(ref, view(list));
}

double oracle_compositional(const TokenSequence& ref,
                            const std::vector<const NBestEntry*>& list) {
  if (list.empty()) throw EmptyList("oracle_compositional");
  if (ref.empty()) throw EmptyReference("oracle_compositional");
  std::unordered_map<std::string, long long> availability;
  for (const NBestEntry* e : list)
    for (const auto& tok : e->tokens) ++availability[tok];
  std::unordered_map<std::string, long long> ref_counts;
  for (const auto& tok : ref) ++ref_counts[tok];
  long long covered = 0;
  for (const auto& [tok, need] : ref_counts) {
    auto it = availability.find(tok);
    if (it != availability.end()) covered += std::min(need, it->second);
  }
  return static_cast<double>(static_cast<long long>(ref.size()) - covered) /
         static_cast<double>(ref.size());
}

double oracle_compositional(const TokenSequence& ref, const NBestList& list) {
  return oracle_compositional(ref, view(list));
}

DualOracleResult oracle_dual(const TokenSequence& ref,
                             const DualHypotheses& dual) {
  DualOracleResult out;
  auto fill = [&ref](OracleResult& r,
                     const std::vector<const NBestEntry*>& list) {
    auto [idx, w] = oracle_nbest(ref, list);
    r.onb_index = idx;
    r.onb_wer = w;
    r.ocp_wer = oracle_compositional(ref, list);
  };
  fill(out.asr, view(dual.asr));
  fill(out.vsr, view(dual.vsr));
  fill(out.unioned, dual.all());
  return out;
}

void CorpusWerAccum::add(int errs, int ref_len) {
  errors += errs;
  ref_words += ref_len;
  rate_sum += static_cast<double>(errs) / static_cast<double>(ref_len);
  ++count;
}

double CorpusWerAccum::corpus_wer() const {
  return ref_words == 0 ? 0.0
                        : static_cast<double>(errors) /
                              static_cast<double>(ref_words);
}

double CorpusWerAccum::mean_wer() const {
  return count == 0 ? 0.0 : rate_sum / static_cast<double>(count);
}

void OracleTable::add(const TokenSequence& ref,
                      const DualHypotheses& dual_hyps) {
  if (ref.empty()) throw EmptyReference("corpus oracle");
  const int ref_len = static_cast<int>(ref.size());
  auto add_row = [&](OracleRow& row,
                     const std::vector<const NBestEntry*>& list) {
    if (list.empty()) throw EmptyList("corpus oracle row " + row.label);
    row.best1.add(edit_distance(ref, list[0]->tokens), ref_len);
    auto [idx, onb_w] = oracle_nbest(ref, list);
    (void)onb_w;
    row.onb.add(edit_distance(ref, list[idx]->tokens), ref_len);
    // The coverage oracle is an exact count of uncovered ref occurrences.
    const double ocp_w = oracle_compositional(ref, list);
    row.ocp.add(static_cast<int>(std::lround(ocp_w * ref_len)), ref_len);
  };
  auto asr_view = [&] {
    std::vector<const NBestEntry*> v;
    for (const auto& e : dual_hyps.asr.entries) v.push_back(&e);
    return v;
  }();
  auto vsr_view = [&] {
    std::vector<const NBestEntry*> v;
    for (const auto& e : dual_hyps.vsr.entries) v.push_back(&e);
    return v;
  }();
  add_row(asr, asr_view);
  add_row(vsr, vsr_view);
  add_row(dual, dual_hyps.all());
  ++records;
}

}  // namespace averc
