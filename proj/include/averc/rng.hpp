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

#ifndef AVERC_RNG_HPP
#define AVERC_RNG_HPP

#include <cstdint>
#include <string>

#include "averc/error.hpp"

namespace averc {

// xoshiro256** seeded through splitmix64. All derived draws (uniform,
// normal, gamma, beta) are implemented here so that fixtures are
// bit-identical across platforms; std::<random> distributions are
// implementation-defined and deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n), n >= 1, via rejection (unbiased).
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Gamma(alpha, 1) via Marsaglia-Tsang squeeze/accept-reject for
  /// alpha >= 1; for alpha < 1 the boost Gamma(alpha+1) * U^(1/alpha).
  double gamma(double alpha);

  /// Beta(alpha, beta) as G1 / (G1 + G2) with two gamma draws.
  double beta(double alpha, double beta);

 private:
  std::uint64_t s_[4];
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

/// Per-record substream: seed mixed with an FNV-1a hash of the record id,
/// so parallel generation is order-independent.
Rng stream_for(std::uint64_t seed, const std::string& record_id);

}  // namespace averc

#endif  // AVERC_RNG_HPP
