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

#ifndef AVERC_TEXTNORM_HPP
#define AVERC_TEXTNORM_HPP

#include <string>
#include <vector>

#include "averc/error.hpp"

namespace averc {

/// Ordered list of normalized word tokens. Tokens are non-empty and
/// contain no whitespace.
using TokenSequence = std::vector<std::string>;

/// Lowercase, split on whitespace, strip leading/trailing punctuation
/// ( . , ? ! ; : " ( ) ) from each token, drop tokens that become empty.
/// Internal apostrophes are kept. Idempotent on its own output.
TokenSequence normalize(const std::string& raw_text);

/// Inverse-ish of normalize: join with single spaces.
std::string join_tokens(const TokenSequence& tokens);

enum class EditKind { Correct, Substitute, Delete, Insert };

struct EditOp {
  EditKind kind;
  std::string ref_token;  // empty for Insert
  std::string hyp_token;  // empty for Delete
};

struct Alignment {
  std::vector<EditOp> ops;
  int correct = 0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;

  int errors() const { return substitutions + deletions + insertions; }
};

/// Minimal-cost word alignment under unit costs. Backtrace ties are broken
/// preferring Correct, then Substitute, then Delete, then Insert, so the
/// operation trace is deterministic.
Alignment align(const TokenSequence& ref, const TokenSequence& hyp);

/// Word edit distance (S + D + I) without materializing the backtrace.
int edit_distance(const TokenSequence& ref, const TokenSequence& hyp);

/// (S + D + I) / |ref|. May exceed 1.0. Throws EmptyReference if |ref| = 0.
double wer(const TokenSequence& ref, const TokenSequence& hyp);

/// Convenience overload normalizing both raw strings first.
double wer(const std::string& ref, const std::string& hyp);

/// Render a fraction as a percentage with one decimal, round-half-up,
/// matching the table convention ("0.357" -> "35.7").
std::string format_percent(double rate);

}  // namespace averc

#endif  // AVERC_TEXTNORM_HPP
