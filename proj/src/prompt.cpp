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

#include "averc/prompt.hpp"

#include "averc/error.hpp"

namespace averc {

std::optional<PromptVariant> prompt_variant_from_name(
    const std::string& name) {
  if (name == "ger") return PromptVariant::GerAudioOnly;
  if (name == "dualhyp") return PromptVariant::DualHyp;
  if (name == "relprompt") return PromptVariant::RelPrompt;
  return std::nullopt;
}

std::string prompt_variant_name(PromptVariant v) {
  switch (v) {
    case PromptVariant::GerAudioOnly:
      return "ger";
    case PromptVariant::DualHyp:
      return "dualhyp";
    case PromptVariant::RelPrompt:
      return "relprompt";
  }
  return "?";
}

namespace {

std::string join_others(const NBestList& list) {
  std::string out;
  for (std::size_t i = 1; i < list.entries.size(); ++i) {
    if (i > 1) out += " || ";
    out += list.entries[i].text;
  }
  return out;
}

}  // namespace

std::string build_prompt(PromptVariant variant, const DualHypotheses& dual,
                         const std::optional<MaskPair>& masks) {
  if (dual.asr.entries.empty()) throw EmptyList("build_prompt: ASR list");
  if (variant != PromptVariant::GerAudioOnly && dual.vsr.entries.empty())
    throw EmptyList("build_prompt: VSR list");
  if (variant == PromptVariant::RelPrompt && !masks)
    throw MissingMasks("RelPrompt requires audio and video masks");

  std::string p;
  p += "Below are the best-hypothesis transcribed from ";
  p += variant == PromptVariant::GerAudioOnly ? "ASR" : "ASR and VSR";
  p += ". Revise it using the words which are only included into "
       "other-hypotheses, and write the response for the true transcription.";
  if (variant == PromptVariant::RelPrompt)
    p += " Refer to the audio and video masks for reliability.";
  p += "\n\n";

  p += "### ASR Best-hypothesis: " + dual.asr.entries[0].text + "\n";
  p += "### ASR Other-hypotheses: " + join_others(dual.asr) + "\n";
  if (variant == PromptVariant::RelPrompt)
    p += "### Audio Mask: " + mask_to_string(masks->audio) + "\n";
  p += "\n";

  if (variant != PromptVariant::GerAudioOnly) {
    p += "### VSR Best-hypothesis: " + dual.vsr.entries[0].text + "\n";
    p += "### VSR Other-hypotheses: " + join_others(dual.vsr) + "\n";
    if (variant == PromptVariant::RelPrompt)
      p += "### Video Mask: " + mask_to_string(masks->video) + "\n";
    p += "\n";
  }

  p += "### Response:";
  return p;
}

TokenSequence postprocess(const std::string& raw_output) {
  static const std::string marker = "### Response:";
  std::string text = raw_output;
  const std::size_t pos = text.rfind(marker);
  if (pos != std::string::npos) text = text.substr(pos + marker.size());
  // Skip leading whitespace/newlines, then cut at the first line break.
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) throw EmptyAnswer("no answer text");
  std::size_t end = text.find_first_of("\r\n", begin);
  if (end == std::string::npos) end = text.size();
  TokenSequence tokens = normalize(text.substr(begin, end - begin));
  if (tokens.empty()) throw EmptyAnswer("answer normalized to nothing");
  return tokens;
}

}  // namespace averc
