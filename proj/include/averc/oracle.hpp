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

#ifndef AVERC_ORACLE_HPP
#define AVERC_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "averc/textnorm.hpp"

namespace averc {

enum class Modality { ASR, VSR, AVSR };

std::string modality_name(Modality m);

struct NBestEntry {
  std::string text;     // raw transcript as produced by the recognizer
  double score = 0.0;   // log-likelihood
  TokenSequence tokens; // normalized view of text

  NBestEntry() = default;
  NBestEntry(std::string t, double s)
      : text(std::move(t)), score(s), tokens(normalize(text)) {}
};

struct NBestList {
  std::vector<NBestEntry> entries;  // descending score, entry 0 is the 1-best
  Modality modality = Modality::ASR;
};

struct DualHypotheses {
  NBestList asr;
  NBestList vsr;

  /// Union view: asr entries followed by vsr entries.
  std::vector<const NBestEntry*> all() const;
};

struct OracleResult {
  double onb_wer = 0.0;
  int onb_index = 0;  // index into the evaluated list / union view
  double ocp_wer = 0.0;
};

struct DualOracleResult {
  OracleResult asr;
  OracleResult vsr;
  OracleResult unioned;
};

/// Entry with minimum WER against ref; ties broken by lowest index.
std::pair<int, double> oracle_nbest(const TokenSequence& ref,
                                    const std::vector<const NBestEntry*>& list);
std::pair<int, double> oracle_nbest(const TokenSequence& ref,
                                    const NBestList& list);

/// Coverage oracle: availability(w) = summed occurrence count of w across
/// all hypotheses; covered(w) = min(count in ref, availability(w));
/// result = (|ref| - sum covered) / |ref|. Order-free, deletion-only.
double oracle_compositional(const TokenSequence& ref,
                            const std::vector<const NBestEntry*>& list);
double oracle_compositional(const TokenSequence& ref, const NBestList& list);

/// Both oracles over the ASR/VSR union, plus per-stream results.
DualOracleResult oracle_dual(const TokenSequence& ref,
                             const DualHypotheses& dual);

/// Corpus-level accumulator: total errors over total reference words, the
/// standard corpus WER convention. Also tracks the per-utterance mean.
struct CorpusWerAccum {
  long long errors = 0;
  long long ref_words = 0;
  double rate_sum = 0.0;
  long long count = 0;

  void add(int errs, int ref_len);
  double corpus_wer() const;
  double mean_wer() const;
};

/// One Table-1-shaped row: 1-best / N-best oracle / compositional oracle,
/// aggregated over a corpus.
struct OracleRow {
  std::string label;
  CorpusWerAccum best1;
  CorpusWerAccum onb;
  CorpusWerAccum ocp;
};

struct OracleTable {
  OracleRow asr{"A"};
  OracleRow vsr{"V"};
  OracleRow dual{"A+V"};
  long long records = 0;

  void add(const TokenSequence& ref, const DualHypotheses& dual_hyps);
};

}  // namespace averc

#endif  // AVERC_ORACLE_HPP
