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

#ifndef AVERC_CORRUPTION_HPP
#define AVERC_CORRUPTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "averc/rng.hpp"

namespace averc {

enum class Stream { Audio, Video };

std::string stream_name(Stream s);

/// Corruption types per stream. Audio kinds also carry an SNR.
const std::vector<std::string>& audio_kinds();   // babble speech music natural
const std::vector<std::string>& video_kinds();   // object hands pixelate blur
bool valid_kind(Stream stream, const std::string& kind);

/// Interval-level description of one stream's corruption. Intervals are
/// half-open [start, end) in seconds, sorted and non-overlapping.
struct CorruptionSpec {
  Stream stream = Stream::Audio;
  std::string kind;
  std::optional<double> snr_db;  // audio only
  std::vector<std::pair<double, double>> intervals;
};

enum class ProtocolMode { TrainRandom, EvalAudioFull, EvalVideoPortion };

struct ProtocolConfig {
  ProtocolMode mode = ProtocolMode::TrainRandom;
  double snr_lo_db = -10.0;
  double snr_hi_db = 10.0;
  double beta_alpha = 2.0;
  double beta_beta = 2.0;
  std::optional<double> fixed_portion;  // EvalVideoPortion default 0.5
  std::uint64_t seed = 0;
  int interval_count = 1;  // TrainRandom knob; the default is one interval
};

void validate(const ProtocolConfig& cfg);

/// One Beta(alpha, beta) draw. Exposed separately so the sampler is
/// directly testable against analytic moments.
double beta_sample(double alpha, double beta, Rng& rng);

/// Draw one stream's corruption for an utterance of the given duration.
CorruptionSpec sample_corruption(double duration_s, Stream stream,
                                 const ProtocolConfig& cfg, Rng& rng);

/// Fraction of the window covered by the spec's intervals.
double corrupted_fraction(const CorruptionSpec& spec,
                          std::pair<double, double> window);

}  // namespace averc

#endif  // AVERC_CORRUPTION_HPP
