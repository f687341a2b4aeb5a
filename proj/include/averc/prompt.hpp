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

#ifndef AVERC_PROMPT_HPP
#define AVERC_PROMPT_HPP

#include <optional>
#include <string>
#include <utility>

#include "averc/oracle.hpp"
#include "averc/relmask.hpp"

namespace averc {

enum class PromptVariant { GerAudioOnly, DualHyp, RelPrompt };

std::optional<PromptVariant> prompt_variant_from_name(const std::string& name);
std::string prompt_variant_name(PromptVariant v);

struct MaskPair {
  ReliabilityMask audio;
  ReliabilityMask video;
};

/// Deterministic, byte-stable prompt text (LF endings).
/// RelPrompt requires both masks; DualHyp drops the mask lines and the
/// reliability sentence; GerAudioOnly additionally drops the VSR block and
/// says "from ASR" instead of "from ASR and VSR".
std::string build_prompt(PromptVariant variant, const DualHypotheses& dual,
                         const std::optional<MaskPair>& masks);

/// Extract the answer: text after the last "### Response:" if echoed,
/// else the whole output; truncate at the first line break; normalize.
/// Throws EmptyAnswer when nothing remains.
TokenSequence postprocess(const std::string& raw_output);

}  // namespace averc

#endif  // AVERC_PROMPT_HPP
