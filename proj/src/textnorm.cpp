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

#include "averc/textnorm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace averc {

namespace {

bool is_strippable(char c) {
  switch (c) {
    case '.':
    case ',':
    case '?':
    case '!':
    case ';':
    case ':':
    case '"':
    case '(':
    case ')':
      return true;
    default:
      return false;
  }
}

}  // namespace

TokenSequence normalize(const std::string& raw_text) {
  TokenSequence out;
  std::istringstream in(raw_text);
  std::string word;
  while (in >> word) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && is_strippable(word[b])) ++b;
    while (e > b && is_strippable(word[e - 1])) --e;
    if (b == e) continue;
    std::string tok = word.substr(b, e - b);
    std::transform(tok.begin(), tok.end(), tok.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    out.push_back(std::move(tok));
  }
  return out;
}

std::string join_tokens(const TokenSequence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

Alignment align(const TokenSequence& ref, const TokenSequence& hyp) {
  const std::size_t R = ref.size();
  const std::size_t H = hyp.size();
  // dp[i][j] = cost of aligning ref[0..i) with hyp[0..j).
  std::vector<std::vector<int>> dp(R + 1, std::vector<int>(H + 1));
  for (std::size_t i = 0; i <= R; ++i) dp[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= H; ++j) dp[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= R; ++i) {
    for (std::size_t j = 1; j <= H; ++j) {
      const int diag = dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int del = dp[i - 1][j] + 1;
      const int ins = dp[i][j - 1] + 1;
      dp[i][j] = std::min({diag, del, ins});
    }
  }

  // Backtrace with fixed precedence: Correct > Substitute > Delete > Insert.
  Alignment a;
  std::size_t i = R, j = H;
  while (i > 0 || j > 0) {
    const int cost = dp[i][j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        cost == dp[i - 1][j - 1]) {
      a.ops.push_back({EditKind::Correct, ref[i - 1], hyp[j - 1]});
      ++a.correct;
      --i;
      --j;
    } else if (i > 0 && j > 0 && cost == dp[i - 1][j - 1] + 1 &&
               ref[i - 1] != hyp[j - 1]) {
      a.ops.push_back({EditKind::Substitute, ref[i - 1], hyp[j - 1]});
      ++a.substitutions;
      --i;
      --j;
    } else if (i > 0 && cost == dp[i - 1][j] + 1) {
      a.ops.push_back({EditKind::Delete, ref[i - 1], ""});
      ++a.deletions;
      --i;
    } else {
      a.ops.push_back({EditKind::Insert, "", hyp[j - 1]});
      ++a.insertions;
      --j;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

int edit_distance(const TokenSequence& ref, const TokenSequence& hyp) {
  const std::size_t R = ref.size();
  const std::size_t H = hyp.size();
  std::vector<int> prev(H + 1), cur(H + 1);
  for (std::size_t j = 0; j <= H; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= R; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= H; ++j) {
      cur[j] = std::min({prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1),
                         prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[H];
}

double wer(const TokenSequence& ref, const TokenSequence& hyp) {
  if (ref.empty()) throw EmptyReference("wer needs a non-empty reference");
  return static_cast<double>(edit_distance(ref, hyp)) /
         static_cast<double>(ref.size());
}

double wer(const std::string& ref, const std::string& hyp) {
  return wer(normalize(ref), normalize(hyp));
}

std::string format_percent(double rate) {
  // Round-half-up at one decimal of the percentage.
  const double pct = rate * 100.0;
  const double scaled = std::floor(pct * 10.0 + 0.5) / 10.0;
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << scaled;
  return out.str();
}

}  // namespace averc
