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

#include "averc/corruption.hpp"

#include <algorithm>
#include <cmath>

namespace averc {

std::string stream_name(Stream s) {
  return s == Stream::Audio ? "audio" : "video";
}

const std::vector<std::string>& audio_kinds() {
  static const std::vector<std::string> kinds{"babble", "speech", "music",
                                             "natural"};
  return kinds;
}

const std::vector<std::string>& video_kinds() {
  static const std::vector<std::string> kinds{"object", "hands", "pixelate",
                                             "blur"};
  return kinds;
}

bool valid_kind(Stream stream, const std::string& kind) {
  const auto& kinds = stream == Stream::Audio ? audio_kinds() : video_kinds();
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

void validate(const ProtocolConfig& cfg) {
  if (cfg.snr_lo_db > cfg.snr_hi_db)
    throw ValidationError("snr range: low > high");
  if (!(cfg.beta_alpha > 0.0) || !(cfg.beta_beta > 0.0))
    throw InvalidShape("beta shape parameters must be > 0");
  if (cfg.fixed_portion &&
      (*cfg.fixed_portion < 0.0 || *cfg.fixed_portion > 1.0))
    throw ValidationError("fixed_portion outside [0, 1]");
  if (cfg.interval_count < 1)
    throw ValidationError("interval_count must be >= 1");
}

double beta_sample(double alpha, double beta, Rng& rng) {
  return rng.beta(alpha, beta);
}

namespace {

// Place `count` equal-length corrupt pieces totaling portion*duration,
// one per equal division of the utterance, at a uniform offset inside
// its division.
std::vector<std::pair<double, double>> place_intervals(double duration,
                                                       double portion,
                                                       int count, Rng& rng) {
  std::vector<std::pair<double, double>> out;
  if (portion <= 0.0) return out;
  const double piece = portion * duration / count;
  const double division = duration / count;
  for (int k = 0; k < count; ++k) {
    const double base = k * division;
    const double slack = division - piece;
    const double start = base + (slack > 0.0 ? rng.uniform(0.0, slack) : 0.0);
    out.emplace_back(start, std::min(start + piece, duration));
  }
  return out;
}

}  // namespace

CorruptionSpec sample_corruption(double duration_s, Stream stream,
                                 const ProtocolConfig& cfg, Rng& rng) {
  if (!(duration_s > 0.0)) throw InvalidDuration("duration must be > 0");
  validate(cfg);

  const auto& kinds = stream == Stream::Audio ? audio_kinds() : video_kinds();
  CorruptionSpec spec;
  spec.stream = stream;
  spec.kind = kinds[rng.uniform_int(kinds.size())];
  if (stream == Stream::Audio)
    spec.snr_db = rng.uniform(cfg.snr_lo_db, cfg.snr_hi_db);

  switch (cfg.mode) {
    case ProtocolMode::TrainRandom: {
      const double portion = beta_sample(cfg.beta_alpha, cfg.beta_beta, rng);
      spec.intervals =
          place_intervals(duration_s, portion, cfg.interval_count, rng);
      break;
    }
    case ProtocolMode::EvalAudioFull:
    case ProtocolMode::EvalVideoPortion: {
      if (stream == Stream::Audio) {
        spec.intervals = {{0.0, duration_s}};
      } else {
        double portion;
        if (cfg.fixed_portion) {
          portion = *cfg.fixed_portion;
        } else if (cfg.mode == ProtocolMode::EvalAudioFull) {
          portion = 0.5;
        } else {
          portion = beta_sample(cfg.beta_alpha, cfg.beta_beta, rng);
        }
        spec.intervals = place_intervals(duration_s, portion, 1, rng);
      }
      break;
    }
  }
  return spec;
}

double corrupted_fraction(const CorruptionSpec& spec,
                          std::pair<double, double> window) {
  const auto [ws, we] = window;
  if (!(we > ws)) throw DegenerateWindow("window must have positive length");
  double overlap = 0.0;
  for (const auto& [s, e] : spec.intervals)
    overlap += std::max(0.0, std::min(e, we) - std::max(s, ws));
  return overlap / (we - ws);
}

}  // namespace averc
