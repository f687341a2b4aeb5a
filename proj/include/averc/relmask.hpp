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

#ifndef AVERC_RELMASK_HPP
#define AVERC_RELMASK_HPP

#include <string>
#include <vector>

#include "averc/corruption.hpp"

namespace averc {

/// Reliability chunk size in seconds (one spoken word at ~150 wpm).
inline constexpr double kSegmentSeconds = 0.4;

/// Corrupted-frame fraction thresholds. Strictly below the clean bound is
/// Clean, strictly above the noisy bound is Noisy, everything else Mixed.
inline constexpr double kCleanBelow = 0.10;
inline constexpr double kNoisyAbove = 0.60;

enum class RelLabel { Clean, Noisy, Mixed };

char rel_label_char(RelLabel l);  // 'C', 'N', 'M'

struct ReliabilityMask {
  Stream stream = Stream::Audio;
  std::vector<RelLabel> tokens;  // one per 0.4 s segment
};

/// K = ceil(duration / 0.4) half-open windows; the last one is clipped.
std::vector<std::pair<double, double>> segment_bounds(double duration_s);

/// Ground-truth labels from corruption intervals.
ReliabilityMask label_mask(const CorruptionSpec& spec, double duration_s);

/// "[C][N][N][M][C]" rendering, no separators.
std::string mask_to_string(const ReliabilityMask& mask);

/// Parse the bracketed rendering back; throws ValidationError on anything
/// that is not a sequence of [C]/[N]/[M].
ReliabilityMask mask_from_string(const std::string& text, Stream stream);

// ---- Predictor over externally supplied per-frame features ----

struct SegmentFeatures {
  std::vector<std::vector<double>> rows;  // frames x dims
  double frame_rate_hz = 25.0;
  Stream stream = Stream::Audio;
};

/// Mean vector per 0.4 s window. Declared duration and frame count may
/// disagree by at most one frame period.
std::vector<std::vector<double>> pool_features(const SegmentFeatures& features,
                                               double duration_s);

struct PredictorModel {
  // weights[c][d], class order fixed as (Clean, Noisy, Mixed).
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;  // size 3
  int epochs = 0;
  double learning_rate = 0.0;
  double final_loss = 0.0;
};

struct TrainOptions {
  double learning_rate = 1e-2;
  int epochs = 500;
  double l2 = 0.0;
};

/// Mean cross-entropy + (l2/2)*||W||^2 and its analytic gradient at the
/// given parameters. Exposed so the gradient can be checked against
/// finite differences.
double predictor_loss_grad(const std::vector<std::vector<double>>& x,
                           const std::vector<RelLabel>& y,
                           const PredictorModel& model, double l2,
                           std::vector<std::vector<double>>* grad_w,
                           std::vector<double>* grad_b);

/// Multinomial logistic regression, full-batch gradient descent from zero
/// initialization. Deterministic.
PredictorModel train_predictor(const std::vector<std::vector<double>>& x,
                               const std::vector<RelLabel>& y,
                               const TrainOptions& opts);

/// Per-segment argmax class; ties break in class order.
ReliabilityMask predict(const PredictorModel& model,
                        const std::vector<std::vector<double>>& pooled,
                        Stream stream);

struct MaskMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;  // false when no positives were predicted
  long long segments = 0;
};

/// Binary collapse: positive = {Noisy, Mixed}, negative = {Clean};
/// micro-aggregated over all records.
MaskMetrics eval_masks(const std::vector<ReliabilityMask>& pred,
                       const std::vector<ReliabilityMask>& gt);

// ---- Feature file format: "FEAT", version 1, u32 frames, u32 dims,
// then row-major f32, all little-endian. ----

void write_feature_file(const std::string& path,
                        const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_feature_file(const std::string& path);

}  // namespace averc

#endif  // AVERC_RELMASK_HPP
