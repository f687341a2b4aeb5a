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

#ifndef AVERC_CONFUSION_NET_HPP
#define AVERC_CONFUSION_NET_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "averc/textnorm.hpp"

namespace averc {

/// The empty string denotes epsilon (no word) inside a slot.
inline const std::string kEpsilon{};

struct Slot {
  // token -> accumulated weight; "" is epsilon. Ordered map keeps
  // iteration deterministic.
  std::map<std::string, double> entries;

  double weight_of(const std::string& token) const;
  bool has(const std::string& token) const { return entries.count(token) > 0; }
};

struct ConfusionNetwork {
  std::vector<Slot> slots;
  int sources = 0;
  double total_weight = 0.0;
};

/// Normalized non-negative weights summing to 1.
using HypothesisWeights = std::vector<double>;

/// Softmax over length-normalized log-likelihoods (score_i / length_i).
/// Shift-invariant in the scores.
HypothesisWeights weights_from_scores(const std::vector<double>& scores,
                                      const std::vector<int>& lengths);

/// Iterative ROVER-style construction: start from the highest-weight
/// hypothesis, then align each next one (descending weight, ties by input
/// index) against the current network with unit costs. Matching a token
/// already in a slot costs 0, as does skipping a slot that already holds
/// epsilon; substitution into a slot, skipping an epsilon-free slot, and
/// creating a new slot each cost 1.
ConfusionNetwork build_cn(const std::vector<TokenSequence>& hyps,
                          const HypothesisWeights& weights);

/// Per-slot argmax by accumulated weight; epsilon winners emit nothing.
/// Weight ties break lexicographically with epsilon last.
TokenSequence vote(const ConfusionNetwork& cn);

/// Minimum-WER token sequence realizable as a path through the network
/// (one entry per slot, epsilon emits nothing). Ties prefer Correct, then
/// epsilon.
std::pair<TokenSequence, double> oracle_path(const ConfusionNetwork& cn,
                                             const TokenSequence& ref);

}  // namespace averc

#endif  // AVERC_CONFUSION_NET_HPP
