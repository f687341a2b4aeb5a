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

#include "averc/confusion_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "averc/error.hpp"

namespace averc {

double Slot::weight_of(const std::string& token) const {
  auto it = entries.find(token);
  return it == entries.end() ? 0.0 : it->second;
}

HypothesisWeights weights_from_scores(const std::vector<double>& scores,
                                      const std::vector<int>& lengths) {
  if (scores.empty() || scores.size() != lengths.size())
    throw LengthMismatch("weights_from_scores: scores vs lengths");
  std::vector<double> norm(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (lengths[i] < 1)
      throw LengthMismatch("weights_from_scores: length < 1");
    norm[i] = scores[i] / static_cast<double>(lengths[i]);
  }
  const double m = *std::max_element(norm.begin(), norm.end());
  double z = 0.0;
  for (double& v : norm) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : norm) v /= z;
  return norm;
}

namespace {

enum class Step { Diagonal, SkipSlot, NewSlot };

// Align one hypothesis against the current network and fold it in.
void merge_hypothesis(ConfusionNetwork& cn, const TokenSequence& hyp,
                      double w) {
  const std::size_t S = cn.slots.size();
  const std::size_t H = hyp.size();
  std::vector<std::vector<int>> dp(S + 1, std::vector<int>(H + 1));
  dp[0][0] = 0;
  for (std::size_t i = 1; i <= S; ++i)
    dp[i][0] = dp[i - 1][0] + (cn.slots[i - 1].has(kEpsilon) ? 0 : 1);
  for (std::size_t j = 1; j <= H; ++j) dp[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= S; ++i) {
    const Slot& slot = cn.slots[i - 1];
    const int skip_cost = slot.has(kEpsilon) ? 0 : 1;
    for (std::size_t j = 1; j <= H; ++j) {
      const int diag = dp[i - 1][j - 1] + (slot.has(hyp[j - 1]) ? 0 : 1);
      const int skip = dp[i - 1][j] + skip_cost;
      const int ins = dp[i][j - 1] + 1;
      dp[i][j] = std::min({diag, skip, ins});
    }
  }

  // Backtrace; fixed precedence diagonal > skip > new-slot.
  std::vector<std::pair<Step, std::string>> trace;  // per consumed position
  std::size_t i = S, j = H;
  while (i > 0 || j > 0) {
    const int cost = dp[i][j];
    const Slot* slot = i > 0 ? &cn.slots[i - 1] : nullptr;
    if (i > 0 && j > 0 &&
        cost == dp[i - 1][j - 1] + (slot->has(hyp[j - 1]) ? 0 : 1)) {
      trace.emplace_back(Step::Diagonal, hyp[j - 1]);
      --i;
      --j;
    } else if (i > 0 &&
               cost == dp[i - 1][j] + (slot->has(kEpsilon) ? 0 : 1)) {
      trace.emplace_back(Step::SkipSlot, kEpsilon);
      --i;
    } else {
      trace.emplace_back(Step::NewSlot, hyp[j - 1]);
      --j;
    }
  }
  std::reverse(trace.begin(), trace.end());

  // Apply the trace, rebuilding the slot list.
  std::vector<Slot> merged;
  merged.reserve(cn.slots.size() + trace.size());
  std::size_t si = 0;
  for (const auto& [step, token] : trace) {
    switch (step) {
      case Step::Diagonal: {
        Slot s = cn.slots[si++];
        s.entries[token] += w;
        merged.push_back(std::move(s));
        break;
      }
      case Step::SkipSlot: {
        Slot s = cn.slots[si++];
        s.entries[kEpsilon] += w;
        merged.push_back(std::move(s));
        break;
      }
      case Step::NewSlot: {
        Slot s;
        s.entries[token] = w;
        if (cn.total_weight > 0.0) s.entries[kEpsilon] = cn.total_weight;
        merged.push_back(std::move(s));
        break;
      }
    }
  }
  cn.slots = std::move(merged);
  cn.total_weight += w;
  ++cn.sources;
}

}  // namespace

ConfusionNetwork build_cn(const std::vector<TokenSequence>& hyps,
                          const HypothesisWeights& weights) {
  if (hyps.empty()) throw EmptyList("build_cn");
  if (hyps.size() != weights.size())
    throw LengthMismatch("build_cn: hyps vs weights");

  // Merge order: descending weight, ties by input index.
  std::vector<std::size_t> order(hyps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return weights[a] > weights[b];
  });

  ConfusionNetwork cn;
  for (std::size_t k : order) merge_hypothesis(cn, hyps[k], weights[k]);
  return cn;
}

TokenSequence vote(const ConfusionNetwork& cn) {
  TokenSequence out;
  for (const Slot& slot : cn.slots) {
    const std::string* best = nullptr;
    double best_w = -1.0;
    for (const auto& [token, weight] : slot.entries) {
      // Map order is epsilon ("") first, then lexicographic; taking a
      // strictly-greater weight later implements "epsilon last" only when
      // epsilon strictly wins, so compare epsilon separately.
      if (weight > best_w ||
          (weight == best_w && best != nullptr && *best == kEpsilon)) {
        best = &token;
        best_w = weight;
      }
    }
    if (best != nullptr && *best != kEpsilon) out.push_back(*best);
  }
  return out;
}

std::pair<TokenSequence, double> oracle_path(const ConfusionNetwork& cn,
                                             const TokenSequence& ref) {
  if (ref.empty()) throw EmptyReference("oracle_path");
  const std::size_t S = cn.slots.size();
  const std::size_t R = ref.size();
  std::vector<std::vector<int>> dp(S + 1, std::vector<int>(R + 1));
  for (std::size_t j = 0; j <= R; ++j) dp[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= S; ++i) {
    const Slot& slot = cn.slots[i - 1];
    const int skip_cost = slot.has(kEpsilon) ? 0 : 1;
    dp[i][0] = dp[i - 1][0] + skip_cost;
    for (std::size_t j = 1; j <= R; ++j) {
      const int diag = dp[i - 1][j - 1] + (slot.has(ref[j - 1]) ? 0 : 1);
      const int skip = dp[i - 1][j] + skip_cost;
      const int del = dp[i][j - 1] + 1;
      dp[i][j] = std::min({diag, skip, del});
    }
  }

  // Backtrace: prefer Correct, then epsilon/skip, then substitute, then
  // reference deletion.
  TokenSequence emitted;
  std::size_t i = S, j = R;
  while (i > 0 || j > 0) {
    const int cost = dp[i][j];
    const Slot* slot = i > 0 ? &cn.slots[i - 1] : nullptr;
    if (i > 0 && j > 0 && slot->has(ref[j - 1]) &&
        cost == dp[i - 1][j - 1]) {
      emitted.push_back(ref[j - 1]);
      --i;
      --j;
    } else if (i > 0 &&
               cost == dp[i - 1][j] + (slot->has(kEpsilon) ? 0 : 1)) {
      if (!slot->has(kEpsilon)) {
        // Forced to emit something; take the smallest real token.
        for (const auto& [token, weight] : slot->entries) {
          (void)weight;
          if (token != kEpsilon) {
            emitted.push_back(token);
            break;
          }
        }
      }
      --i;
    } else if (i > 0 && j > 0 && !slot->has(ref[j - 1]) &&
               cost == dp[i - 1][j - 1] + 1) {
      // Substitute: smallest real token different from the ref word.
      for (const auto& [token, weight] : slot->entries) {
        (void)weight;
        if (token != kEpsilon && token != ref[j - 1]) {
          emitted.push_back(token);
          break;
        }
      }
      --i;
      --j;
    } else {
      --j;  // reference deletion, nothing emitted
    }
  }
  std::reverse(emitted.begin(), emitted.end());
  return {emitted, static_cast<double>(dp[S][R]) / static_cast<double>(R)};
}

}  // namespace averc
