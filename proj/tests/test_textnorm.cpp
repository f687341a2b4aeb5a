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

#include <doctest.h>

#include "averc/rng.hpp"
#include "averc/textnorm.hpp"

using namespace averc;

namespace {

// Independent oracle: plain recursive minimization over all edit scripts,
// no memoization, usable only on tiny sequences.
int brute_distance(const TokenSequence& r, const TokenSequence& h,
                   std::size_t i = 0, std::size_t j = 0) {
  if (i == r.size()) return static_cast<int>(h.size() - j);
  if (j == h.size()) return static_cast<int>(r.size() - i);
  const int sub = brute_distance(r, h, i + 1, j + 1) + (r[i] != h[j] ? 1 : 0);
  const int del = brute_distance(r, h, i + 1, j) + 1;
  const int ins = brute_distance(r, h, i, j + 1) + 1;
  return std::min({sub, del, ins});
}

TokenSequence random_seq(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  TokenSequence seq;
  const std::size_t len = rng.uniform_int(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    seq.push_back(vocab[rng.uniform_int(vocab.size())]);
  return seq;
}

}  // namespace

TEST_CASE("normalize folds case and punctuation") {
  CHECK(normalize("Hello, World!") == TokenSequence{"hello", "world"});
  CHECK(normalize("it is the same .") ==
        TokenSequence{"it", "is", "the", "same"});
  CHECK(normalize("").empty());
  CHECK(normalize("   \t \n ").empty());
  CHECK(normalize("don't \"quote\" me") ==
        TokenSequence{"don't", "quote", "me"});
  CHECK(normalize("<unk>") == TokenSequence{"<unk>"});
}

TEST_CASE("normalize is idempotent on its own output") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto seq = normalize("Some, Mixed. CASE? input!! with (parens) & more");
    CHECK(normalize(join_tokens(seq)) == seq);
    auto rand_seq = random_seq(rng, 8);
    CHECK(normalize(join_tokens(rand_seq)) == rand_seq);
  }
}

TEST_CASE("align counts on known cases") {
  const auto identity = align({"a", "b", "c"}, {"a", "b", "c"});
  CHECK(identity.correct == 3);
  CHECK(identity.errors() == 0);

  // (C,S,D,I) = (1,1,1,0), checked by the exhaustive oracle below.
  const auto a = align({"a", "b", "c"}, {"a", "x"});
  CHECK(a.correct == 1);
  CHECK(a.substitutions == 1);
  CHECK(a.deletions == 1);
  CHECK(a.insertions == 0);
  CHECK(a.errors() == brute_distance({"a", "b", "c"}, {"a", "x"}));

  const auto b = align({"a"}, {"x", "y"});
  CHECK(b.correct == 0);
  CHECK(b.substitutions == 1);
  CHECK(b.deletions == 0);
  CHECK(b.insertions == 1);
  CHECK(b.errors() == brute_distance({"a"}, {"x", "y"}));
}

TEST_CASE("alignment bookkeeping identities hold on random pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = random_seq(rng, 7);
    const auto h = random_seq(rng, 7);
    const auto a = align(r, h);
    CHECK(a.correct + a.substitutions + a.deletions ==
          static_cast<int>(r.size()));
    CHECK(a.correct + a.substitutions + a.insertions ==
          static_cast<int>(h.size()));
    CHECK(a.errors() == edit_distance(r, h));
    CHECK(a.errors() == brute_distance(r, h));
  }
}

TEST_CASE("edit distance is a metric with standard bounds") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_seq(rng, 6);
    const auto y = random_seq(rng, 6);
    const auto z = random_seq(rng, 6);
    const int dxy = edit_distance(x, y);
    CHECK(dxy == edit_distance(y, x));
    CHECK(dxy <= edit_distance(x, z) + edit_distance(z, y));
    CHECK(dxy >= std::abs(static_cast<int>(x.size()) -
                          static_cast<int>(y.size())));
    CHECK(dxy <= static_cast<int>(std::max(x.size(), y.size())));
    if (!x.empty()) CHECK(wer(x, x) == 0.0);
  }
}

TEST_CASE("wer golden values from printed transcripts") {
  const std::string ref =
      "but everyone going into the den gets a fresh chance to turn things "
      "round";
  CHECK(format_percent(wer(
            ref,
            "everyone going into the den has a fresh chance to talk it "
            "around")) == "35.7");
  CHECK(format_percent(wer(
            ref,
            "everyone going into the den gets a fresh chance to turn things "
            "around")) == "14.3");
  CHECK(wer(TokenSequence{"a", "b"}, TokenSequence{}) == 1.0);
  CHECK_THROWS_AS(wer(TokenSequence{}, TokenSequence{"a"}), EmptyReference);
}

TEST_CASE("format_percent rounds half up at one decimal") {
  CHECK(format_percent(0.357) == "35.7");
  CHECK(format_percent(0.0) == "0.0");
  CHECK(format_percent(1.286) == "128.6");
  CHECK(format_percent(0.12345) == "12.3");
  CHECK(format_percent(0.125) == "12.5");
  CHECK(format_percent(0.1285) == "12.9");  // half up
}
