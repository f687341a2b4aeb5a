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

#include <cmath>
#include <cstdio>

#include "averc/relmask.hpp"
#include "averc/rng.hpp"
#include "averc/textnorm.hpp"

using namespace averc;

TEST_CASE("segment_bounds splits into clipped 0.4 s windows") {
  auto b = segment_bounds(2.0);
  REQUIRE(b.size() == 5);
  CHECK(b[0] == std::pair{0.0, 0.4});
  CHECK(b[4].second == 2.0);

  b = segment_bounds(0.3);
  REQUIRE(b.size() == 1);
  CHECK(b[0] == std::pair{0.0, 0.3});

  b = segment_bounds(2.1);
  REQUIRE(b.size() == 6);
  CHECK(b[5].first == doctest::Approx(2.0));
  CHECK(b[5].second == doctest::Approx(2.1));

  CHECK_THROWS_AS(segment_bounds(0.0), InvalidDuration);
  CHECK_THROWS_AS(segment_bounds(-1.0), InvalidDuration);
}

TEST_CASE("label_mask applies the fraction thresholds") {
  CorruptionSpec spec;
  spec.stream = Stream::Audio;
  spec.kind = "babble";
  spec.intervals = {{0.5, 1.5}};
  const auto mask = label_mask(spec, 2.0);
  // Windows: [0,.4)=0, [.4,.8)=0.75, [.8,1.2)=1, [1.2,1.6)=0.75, [1.6,2)=0.
  REQUIRE(mask.tokens.size() == 5);
  CHECK(mask.tokens[0] == RelLabel::Clean);
  CHECK(mask.tokens[1] == RelLabel::Noisy);
  CHECK(mask.tokens[2] == RelLabel::Noisy);
  CHECK(mask.tokens[3] == RelLabel::Noisy);
  CHECK(mask.tokens[4] == RelLabel::Clean);
  CHECK(mask_to_string(mask) == "[C][N][N][N][C]");

  // Boundary fractions land on Mixed: exactly 0.10 and exactly 0.60.
  spec.intervals = {{0.0, 0.10 * 0.4}};
  CHECK(label_mask(spec, 0.4).tokens[0] == RelLabel::Mixed);
  spec.intervals = {{0.0, 0.24}};
  CHECK(label_mask(spec, 0.4).tokens[0] == RelLabel::Mixed);
  spec.intervals = {{0.0, 0.2}};
  CHECK(label_mask(spec, 0.4).tokens[0] == RelLabel::Mixed);
  // Just outside the band.
  spec.intervals = {{0.0, 0.039}};
  CHECK(label_mask(spec, 0.4).tokens[0] == RelLabel::Clean);
  spec.intervals = {{0.0, 0.25}};
  CHECK(label_mask(spec, 0.4).tokens[0] == RelLabel::Noisy);
}

TEST_CASE("mask strings round-trip and reject junk") {
  const auto mask = mask_from_string("[C][N][N][M][C]", Stream::Audio);
  REQUIRE(mask.tokens.size() == 5);
  CHECK(mask.tokens[3] == RelLabel::Mixed);
  CHECK(mask_to_string(mask) == "[C][N][N][M][C]");
  CHECK(mask_from_string("", Stream::Video).tokens.empty());

  CHECK_THROWS_AS(mask_from_string("[C][N", Stream::Audio), ValidationError);
  CHECK_THROWS_AS(mask_from_string("[X]", Stream::Audio), ValidationError);
  CHECK_THROWS_AS(mask_from_string("CNM", Stream::Audio), ValidationError);
}

TEST_CASE("pool_features averages frames per segment") {
  SegmentFeatures feats;
  feats.frame_rate_hz = 25.0;
  // 50 frames at 25 Hz over 2.0 s -> 5 windows of 10 frames.
  for (int f = 0; f < 50; ++f)
    feats.rows.push_back({static_cast<double>(f), 1.0});
  const auto pooled = pool_features(feats, 2.0);
  REQUIRE(pooled.size() == 5);
  CHECK(pooled[0][0] == doctest::Approx(4.5));   // mean of 0..9
  CHECK(pooled[4][0] == doctest::Approx(44.5));  // mean of 40..49
  for (const auto& row : pooled) CHECK(row[1] == doctest::Approx(1.0));

  // One frame of slack against the declared duration is tolerated.
  feats.rows.pop_back();
  CHECK(pool_features(feats, 2.0).size() == 5);

  feats.rows.resize(40);
  CHECK_THROWS_AS(pool_features(feats, 2.0), FrameCountMismatch);

  SegmentFeatures ragged;
  ragged.rows = {{1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(pool_features(ragged, 0.08), DimensionMismatch);
}

TEST_CASE("zero-epoch loss equals ln 3") {
  const std::vector<std::vector<double>> x{{0.0}, {1.0}, {2.0}};
  const std::vector<RelLabel> y{RelLabel::Clean, RelLabel::Noisy,
                                RelLabel::Mixed};
  TrainOptions opts;
  opts.epochs = 0;
  const auto model = train_predictor(x, y, opts);
  CHECK(model.final_loss == doctest::Approx(std::log(3.0)));
}

TEST_CASE("training rejects degenerate inputs") {
  TrainOptions opts;
  CHECK_THROWS_AS(
      train_predictor({{1.0}}, {RelLabel::Clean, RelLabel::Noisy}, opts),
      LengthMismatch);
  CHECK_THROWS_AS(
      train_predictor({{1.0}, {2.0}}, {RelLabel::Clean, RelLabel::Clean},
                      opts),
      DegenerateLabels);
  CHECK_THROWS_AS(
      train_predictor({{1.0}, {std::nan("")}},
                      {RelLabel::Clean, RelLabel::Noisy}, opts),
      NonFiniteFeature);
}

TEST_CASE("analytic gradient matches finite differences") {
  Rng rng(5);
  const int dims = 4;
  std::vector<std::vector<double>> x;
  std::vector<RelLabel> y;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> row(dims);
    for (double& v : row) v = rng.normal();
    x.push_back(row);
    y.push_back(static_cast<RelLabel>(rng.uniform_int(3)));
  }
  PredictorModel model;
  model.weights.assign(3, std::vector<double>(dims));
  model.bias.assign(3, 0.0);
  for (auto& wc : model.weights)
    for (double& w : wc) w = 0.3 * rng.normal();
  for (double& b : model.bias) b = 0.3 * rng.normal();

  const double l2 = 0.01;
  std::vector<std::vector<double>> gw;
  std::vector<double> gb;
  predictor_loss_grad(x, y, model, l2, &gw, &gb);

  const double h = 1e-6;
  for (int c = 0; c < 3; ++c) {
    for (int d = 0; d < dims; ++d) {
      auto plus = model;
      auto minus = model;
      plus.weights[c][d] += h;
      minus.weights[c][d] -= h;
      const double fd =
          (predictor_loss_grad(x, y, plus, l2, nullptr, nullptr) -
           predictor_loss_grad(x, y, minus, l2, nullptr, nullptr)) /
          (2 * h);
      CHECK(std::abs(fd - gw[c][d]) < 1e-4);
    }
    auto plus = model;
    auto minus = model;
    plus.bias[c] += h;
    minus.bias[c] -= h;
    const double fd = (predictor_loss_grad(x, y, plus, l2, nullptr, nullptr) -
                       predictor_loss_grad(x, y, minus, l2, nullptr, nullptr)) /
                      (2 * h);
    CHECK(std::abs(fd - gb[c]) < 1e-4);
  }
}

TEST_CASE("a separable problem trains to high accuracy") {
  // Three well-separated Gaussian blobs, one per class.
  Rng rng(77);
  std::vector<std::vector<double>> x;
  std::vector<RelLabel> y;
  const double centers[3][2] = {{-5.0, 0.0}, {5.0, 0.0}, {0.0, 6.0}};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 100; ++i) {
      x.push_back({centers[c][0] + 0.3 * rng.normal(),
                   centers[c][1] + 0.3 * rng.normal()});
      y.push_back(static_cast<RelLabel>(c));
    }
  }
  TrainOptions opts;
  opts.epochs = 800;
  opts.learning_rate = 0.1;
  const auto model = train_predictor(x, y, opts);
  const auto pred = predict(model, x, Stream::Audio);
  int hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (pred.tokens[i] == y[i]) ++hits;
  CHECK(static_cast<double>(hits) / static_cast<double>(y.size()) >= 0.99);
  CHECK(model.final_loss < std::log(3.0));

  // Training is deterministic.
  const auto again = train_predictor(x, y, opts);
  CHECK(again.weights == model.weights);
  CHECK(again.bias == model.bias);
}

TEST_CASE("eval_masks micro-aggregates the binary collapse") {
  auto m = [](const std::string& s) {
    return mask_from_string(s, Stream::Audio);
  };
  const std::vector<ReliabilityMask> gt{m("[C][N][M][C][N]"), m("[C][C][N][C][C]")};
  const std::vector<ReliabilityMask> pr{m("[C][N][C][N][N]"), m("[C][C][N][C][C]")};
  // Positives = non-Clean. tp=3 (N,N in rec1 + N in rec2), fp=1, fn=1, tn=5.
  const auto metrics = eval_masks(pr, gt);
  CHECK(metrics.segments == 10);
  CHECK(metrics.accuracy == doctest::Approx(0.8));
  CHECK(metrics.precision == doctest::Approx(0.75));
  CHECK(metrics.recall == doctest::Approx(0.75));
  CHECK(metrics.f1 == doctest::Approx(0.75));
  CHECK(metrics.precision_defined);

  // No predicted positives: precision undefined, reported as zero.
  const auto empty = eval_masks({m("[C][C]")}, {m("[N][C]")});
  CHECK_FALSE(empty.precision_defined);
  CHECK(empty.precision == 0.0);
  CHECK(empty.f1 == 0.0);

  CHECK_THROWS_AS(eval_masks({m("[C]")}, {m("[C][C]")}), LengthMismatch);

  // Published-style rounding: precision 95.3 / recall 87.8 -> F1 91.4.
  const double f1 = 2.0 * 0.953 * 0.878 / (0.953 + 0.878);
  CHECK(format_percent(f1) == "91.4");
}

TEST_CASE("feature files round-trip through the binary format") {
  const std::string path = "averc_test_feat.bin";
  std::vector<std::vector<double>> rows;
  Rng rng(31);
  for (int f = 0; f < 17; ++f) {
    std::vector<double> row(6);
    for (double& v : row) v = rng.normal();
    rows.push_back(row);
  }
  write_feature_file(path, rows);
  const auto back = read_feature_file(path);
  REQUIRE(back.size() == rows.size());
  for (std::size_t f = 0; f < rows.size(); ++f)
    for (std::size_t d = 0; d < rows[f].size(); ++d)
      CHECK(back[f][d] == doctest::Approx(rows[f][d]).epsilon(1e-6));

  CHECK_THROWS_AS(read_feature_file("no_such_file.bin"), IoFailure);

  // Wrong magic is rejected.
  {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    std::fputs("JUNKJUNKJUNK", fp);
    std::fclose(fp);
  }
  CHECK_THROWS_AS(read_feature_file(path), ValidationError);
  std::remove(path.c_str());
}
