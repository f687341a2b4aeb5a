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

#include "averc/relmask.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace averc {

char rel_label_char(RelLabel l) {
  switch (l) {
    case RelLabel::Clean:
      return 'C';
    case RelLabel::Noisy:
      return 'N';
    case RelLabel::Mixed:
      return 'M';
  }
  return '?';
}

std::vector<std::pair<double, double>> segment_bounds(double duration_s) {
  if (!(duration_s > 0.0)) throw InvalidDuration("duration must be > 0");
  int k = static_cast<int>(std::ceil(duration_s / kSegmentSeconds));
  // ceil can land one past the end when duration is a near-exact multiple
  // of the segment length; drop the degenerate trailing window.
  while (k > 1 && (k - 1) * kSegmentSeconds >= duration_s) --k;
  std::vector<std::pair<double, double>> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double start = i * kSegmentSeconds;
    out.emplace_back(start, std::min(start + kSegmentSeconds, duration_s));
  }
  return out;
}

ReliabilityMask label_mask(const CorruptionSpec& spec, double duration_s) {
  ReliabilityMask mask;
  mask.stream = spec.stream;
  for (const auto& window : segment_bounds(duration_s)) {
    const double f = corrupted_fraction(spec, window);
    RelLabel label;
    if (f < kCleanBelow)
      label = RelLabel::Clean;
    else if (f > kNoisyAbove)
      label = RelLabel::Noisy;
    else
      label = RelLabel::Mixed;
    mask.tokens.push_back(label);
  }
  return mask;
}

std::string mask_to_string(const ReliabilityMask& mask) {
  std::string out;
  out.reserve(mask.tokens.size() * 3);
  for (RelLabel l : mask.tokens) {
    out += '[';
    out += rel_label_char(l);
    out += ']';
  }
  return out;
}

ReliabilityMask mask_from_string(const std::string& text, Stream stream) {
  ReliabilityMask mask;
  mask.stream = stream;
  if (text.size() % 3 != 0)
    throw ValidationError("mask string length not a multiple of 3: " + text);
  for (std::size_t i = 0; i < text.size(); i += 3) {
    if (text[i] != '[' || text[i + 2] != ']')
      throw ValidationError("malformed mask token in: " + text);
    switch (text[i + 1]) {
      case 'C':
        mask.tokens.push_back(RelLabel::Clean);
        break;
      case 'N':
        mask.tokens.push_back(RelLabel::Noisy);
        break;
      case 'M':
        mask.tokens.push_back(RelLabel::Mixed);
        break;
      default:
        throw ValidationError(std::string("unknown mask label '") +
                              text[i + 1] + "'");
    }
  }
  return mask;
}

std::vector<std::vector<double>> pool_features(const SegmentFeatures& features,
                                               double duration_s) {
  if (!(duration_s > 0.0)) throw InvalidDuration("duration must be > 0");
  const std::size_t frames = features.rows.size();
  if (frames == 0) throw FrameCountMismatch("no frames");
  const std::size_t dims = features.rows[0].size();
  for (const auto& row : features.rows)
    if (row.size() != dims)
      throw DimensionMismatch("ragged feature rows");

  const double expected = duration_s * features.frame_rate_hz;
  if (std::abs(static_cast<double>(frames) - expected) > 1.0 + 1e-9)
    throw FrameCountMismatch(
        "declared duration implies " + std::to_string(expected) +
        " frames, got " + std::to_string(frames));

  std::vector<std::vector<double>> pooled;
  for (const auto& [ws, we] : segment_bounds(duration_s)) {
    // Frames whose start time lies in the window.
    const std::size_t lo = static_cast<std::size_t>(
        std::ceil(ws * features.frame_rate_hz - 1e-9));
    std::size_t hi = static_cast<std::size_t>(
        std::ceil(we * features.frame_rate_hz - 1e-9));
    hi = std::min(hi, frames);
    if (lo >= hi)
      throw FrameCountMismatch("empty segment window at " +
                               std::to_string(ws));
    std::vector<double> mean(dims, 0.0);
    for (std::size_t f = lo; f < hi; ++f)
      for (std::size_t d = 0; d < dims; ++d) mean[d] += features.rows[f][d];
    for (double& v : mean) v /= static_cast<double>(hi - lo);
    pooled.push_back(std::move(mean));
  }
  return pooled;
}

namespace {

constexpr int kClasses = 3;

void softmax3(double* z) {
  const double m = std::max({z[0], z[1], z[2]});
  double s = 0.0;
  for (int c = 0; c < kClasses; ++c) {
    z[c] = std::exp(z[c] - m);
    s += z[c];
  }
  for (int c = 0; c < kClasses; ++c) z[c] /= s;
}

}  // namespace

double predictor_loss_grad(const std::vector<std::vector<double>>& x,
                           const std::vector<RelLabel>& y,
                           const PredictorModel& model, double l2,
                           std::vector<std::vector<double>>* grad_w,
                           std::vector<double>* grad_b) {
  const std::size_t n = x.size();
  const std::size_t dims = model.weights[0].size();
  if (grad_w) {
    grad_w->assign(kClasses, std::vector<double>(dims, 0.0));
    grad_b->assign(kClasses, 0.0);
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p[kClasses];
    for (int c = 0; c < kClasses; ++c) {
      double z = model.bias[c];
      for (std::size_t d = 0; d < dims; ++d)
        z += model.weights[c][d] * x[i][d];
      p[c] = z;
    }
    softmax3(p);
    const int yi = static_cast<int>(y[i]);
    loss -= std::log(std::max(p[yi], 1e-300));
    if (grad_w) {
      for (int c = 0; c < kClasses; ++c) {
        const double err = p[c] - (c == yi ? 1.0 : 0.0);
        (*grad_b)[c] += err;
        for (std::size_t d = 0; d < dims; ++d)
          (*grad_w)[c][d] += err * x[i][d];
      }
    }
  }
  loss /= static_cast<double>(n);
  if (grad_w) {
    for (int c = 0; c < kClasses; ++c) {
      (*grad_b)[c] /= static_cast<double>(n);
      for (std::size_t d = 0; d < dims; ++d)
        (*grad_w)[c][d] =
            (*grad_w)[c][d] / static_cast<double>(n) + l2 * model.weights[c][d];
    }
  }
  double reg = 0.0;
  for (int c = 0; c < kClasses; ++c)
    for (std::size_t d = 0; d < dims; ++d)
      reg += model.weights[c][d] * model.weights[c][d];
  return loss + 0.5 * l2 * reg;
}

PredictorModel train_predictor(const std::vector<std::vector<double>>& x,
                               const std::vector<RelLabel>& y,
                               const TrainOptions& opts) {
  if (x.empty() || x.size() != y.size())
    throw LengthMismatch("train_predictor: features vs labels");
  const std::size_t dims = x[0].size();
  bool present[kClasses] = {false, false, false};
  for (const auto& row : x) {
    if (row.size() != dims) throw DimensionMismatch("ragged features");
    for (double v : row)
      if (!std::isfinite(v)) throw NonFiniteFeature("non-finite feature");
  }
  for (RelLabel l : y) present[static_cast<int>(l)] = true;
  int n_present = present[0] + present[1] + present[2];
  if (n_present < 2)
    throw DegenerateLabels("training set contains a single class");

  PredictorModel model;
  model.weights.assign(kClasses, std::vector<double>(dims, 0.0));
  model.bias.assign(kClasses, 0.0);
  model.learning_rate = opts.learning_rate;
  model.epochs = opts.epochs;

  std::vector<std::vector<double>> gw;
  std::vector<double> gb;
  double loss = predictor_loss_grad(x, y, model, opts.l2, nullptr, nullptr);
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    loss = predictor_loss_grad(x, y, model, opts.l2, &gw, &gb);
    for (int c = 0; c < kClasses; ++c) {
      model.bias[c] -= opts.learning_rate * gb[c];
      for (std::size_t d = 0; d < dims; ++d)
        model.weights[c][d] -= opts.learning_rate * gw[c][d];
    }
  }
  model.final_loss =
      predictor_loss_grad(x, y, model, opts.l2, nullptr, nullptr);
  if (opts.epochs == 0) model.final_loss = loss;
  return model;
}

ReliabilityMask predict(const PredictorModel& model,
                        const std::vector<std::vector<double>>& pooled,
                        Stream stream) {
  const std::size_t dims = model.weights[0].size();
  ReliabilityMask mask;
  mask.stream = stream;
  for (const auto& v : pooled) {
    if (v.size() != dims)
      throw DimensionMismatch("predict: feature dims vs model dims");
    int best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < kClasses; ++c) {
      double z = model.bias[c];
      for (std::size_t d = 0; d < dims; ++d) z += model.weights[c][d] * v[d];
      if (z > best_z) {
        best_z = z;
        best = c;
      }
    }
    mask.tokens.push_back(static_cast<RelLabel>(best));
  }
  return mask;
}

MaskMetrics eval_masks(const std::vector<ReliabilityMask>& pred,
                       const std::vector<ReliabilityMask>& gt) {
  if (pred.size() != gt.size())
    throw LengthMismatch("eval_masks: record counts differ");
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t r = 0; r < pred.size(); ++r) {
    if (pred[r].tokens.size() != gt[r].tokens.size())
      throw LengthMismatch("eval_masks: mask lengths differ at record " +
                           std::to_string(r));
    for (std::size_t i = 0; i < pred[r].tokens.size(); ++i) {
      const bool p = pred[r].tokens[i] != RelLabel::Clean;
      const bool g = gt[r].tokens[i] != RelLabel::Clean;
      if (p && g)
        ++tp;
      else if (p && !g)
        ++fp;
      else if (!p && g)
        ++fn;
      else
        ++tn;
    }
  }
  MaskMetrics m;
  m.segments = tp + fp + fn + tn;
  m.accuracy = m.segments == 0
                   ? 0.0
                   : static_cast<double>(tp + tn) /
                         static_cast<double>(m.segments);
  if (tp + fp == 0) {
    m.precision = 0.0;
    m.precision_defined = false;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  m.recall = tp + fn == 0 ? 0.0
                          : static_cast<double>(tp) /
                                static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_feature_file(const std::string& path,
                        const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path);
  out.write("FEAT", 4);
  out.put(1);  // version
  const std::uint32_t frames = static_cast<std::uint32_t>(rows.size());
  const std::uint32_t dims =
      frames == 0 ? 0 : static_cast<std::uint32_t>(rows[0].size());
  put_u32le(out, frames);
  put_u32le(out, dims);
  for (const auto& row : rows) {
    if (row.size() != dims) throw DimensionMismatch("ragged feature rows");
    for (double v : row) {
      float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32le(out, bits);
    }
  }
  if (!out) throw IoFailure("short write to " + path);
}

std::vector<std::vector<double>> read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FEAT", 4) != 0)
    throw ValidationError("bad feature file magic in " + path);
  const int version = in.get();
  if (version != 1)
    throw SchemaVersionUnsupported("feature file version " +
                                   std::to_string(version));
  const std::uint32_t frames = get_u32le(in);
  const std::uint32_t dims = get_u32le(in);
  std::vector<std::vector<double>> rows(frames, std::vector<double>(dims));
  for (auto& row : rows) {
    for (double& v : row) {
      const std::uint32_t bits = get_u32le(in);
      float f;
      std::memcpy(&f, &bits, 4);
      v = f;
    }
  }
  if (!in) throw ValidationError("truncated feature file " + path);
  return rows;
}

}  // namespace averc
