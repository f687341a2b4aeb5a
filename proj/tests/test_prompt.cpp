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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "averc/prompt.hpp"

using namespace averc;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(AVERC_TEST_DATA_DIR) + "/golden/" + name,
                   std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DualHypotheses example_dual() {
  DualHypotheses dual;
  dual.asr.modality = Modality::ASR;
  dual.asr.entries.emplace_back("everyone going into the den has a fresh chance",
                                -1.0);
  dual.asr.entries.emplace_back(
      "everyone going into the den is given a fresh chance", -2.0);
  dual.asr.entries.emplace_back(
      "and everyone going into the den has a fresh chance", -3.0);
  dual.vsr.modality = Modality::VSR;
  dual.vsr.entries.emplace_back(
      "but everyone going into the den gets a fresh chance", -1.0);
  dual.vsr.entries.emplace_back(
      "everyone going into the then gets a fresh chance", -2.0);
  dual.vsr.entries.emplace_back(
      "but everyone going into the den gets a flash chance", -3.0);
  return dual;
}

MaskPair example_masks() {
  MaskPair masks;
  masks.audio = mask_from_string("[C][N][N][M][C]", Stream::Audio);
  masks.video = mask_from_string("[C][C][C][N][N]", Stream::Video);
  return masks;
}

}  // namespace

TEST_CASE("prompt variants match the golden bytes") {
  const auto dual = example_dual();
  const auto masks = example_masks();
  CHECK(build_prompt(PromptVariant::RelPrompt, dual, masks) ==
        read_file("prompt_relprompt.txt"));
  CHECK(build_prompt(PromptVariant::DualHyp, dual, std::nullopt) ==
        read_file("prompt_dualhyp.txt"));
  CHECK(build_prompt(PromptVariant::GerAudioOnly, dual, std::nullopt) ==
        read_file("prompt_ger.txt"));
  // Masks are simply ignored when the variant does not use them.
  CHECK(build_prompt(PromptVariant::DualHyp, dual, masks) ==
        read_file("prompt_dualhyp.txt"));
}

TEST_CASE("each hypothesis appears exactly once") {
  const auto dual = example_dual();
  const auto text = build_prompt(PromptVariant::RelPrompt, dual,
                                 example_masks());
  // Split the prompt into hypothesis fields: the value after each header
  // line's ": ", with other-hypotheses further split on " || ".
  std::vector<std::string> fields;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto colon = line.find(": ");
    if (line.rfind("### ", 0) != 0 || colon == std::string::npos) continue;
    std::string value = line.substr(colon + 2);
    std::size_t start = 0;
    for (std::size_t sep = value.find(" || "); sep != std::string::npos;
         sep = value.find(" || ", start)) {
      fields.push_back(value.substr(start, sep - start));
      start = sep + 4;
    }
    fields.push_back(value.substr(start));
  }
  auto count = [&](const std::string& hyp) {
    return std::count(fields.begin(), fields.end(), hyp);
  };
  for (const auto& e : dual.asr.entries) CHECK(count(e.text) == 1);
  for (const auto& e : dual.vsr.entries) CHECK(count(e.text) == 1);
  CHECK(fields.size() == 8);  // 3 + 3 hypotheses plus the two mask lines
  CHECK(text.rfind("### Response:") == text.size() - 13);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("one-best lists leave the other-hypotheses line empty") {
  DualHypotheses dual;
  dual.asr.entries.emplace_back("hello there", -1.0);
  dual.vsr.entries.emplace_back("hello hair", -1.0);
  const auto text = build_prompt(PromptVariant::DualHyp, dual, std::nullopt);
  CHECK(text.find("### ASR Other-hypotheses: \n") != std::string::npos);
  CHECK(text.find("### VSR Other-hypotheses: \n") != std::string::npos);
  CHECK(text.find(" || ") == std::string::npos);
}

TEST_CASE("variant names round-trip") {
  for (auto v : {PromptVariant::GerAudioOnly, PromptVariant::DualHyp,
                 PromptVariant::RelPrompt})
    CHECK(prompt_variant_from_name(prompt_variant_name(v)) == v);
  CHECK_FALSE(prompt_variant_from_name("nope").has_value());
}

TEST_CASE("build_prompt validates its inputs") {
  DualHypotheses dual = example_dual();
  CHECK_THROWS_AS(build_prompt(PromptVariant::RelPrompt, dual, std::nullopt),
                  MissingMasks);
  dual.vsr.entries.clear();
  CHECK_THROWS_AS(build_prompt(PromptVariant::DualHyp, dual, std::nullopt),
                  EmptyList);
  CHECK_NOTHROW(build_prompt(PromptVariant::GerAudioOnly, dual, std::nullopt));
  dual.asr.entries.clear();
  CHECK_THROWS_AS(
      build_prompt(PromptVariant::GerAudioOnly, dual, std::nullopt),
      EmptyList);
}

TEST_CASE("postprocess extracts and normalizes the answer") {
  CHECK(postprocess("### Response: Hello, World!") ==
        TokenSequence{"hello", "world"});
  CHECK(postprocess("prefix ### Response:\n  The answer line\nsecond line") ==
        TokenSequence{"the", "answer", "line"});
  // Last marker wins when the prompt is echoed back.
  CHECK(postprocess("### Response: wrong\n### Response: right") ==
        TokenSequence{"right"});
  // No marker: the whole output is the answer.
  CHECK(postprocess("plain text output") ==
        TokenSequence{"plain", "text", "output"});
  CHECK_THROWS_AS(postprocess("### Response:   \n  "), EmptyAnswer);
  CHECK_THROWS_AS(postprocess("### Response: ..."), EmptyAnswer);
}
