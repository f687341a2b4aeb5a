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

#ifndef AVERC_CORRECTOR_HPP
#define AVERC_CORRECTOR_HPP

#include <memory>
#include <string>

#include "averc/dataset.hpp"
#include "averc/prompt.hpp"

namespace averc {

struct CorrectionRequest {
  std::string record_id;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 128;
  const DualRecord* record = nullptr;  // stubs read hypotheses/reference
};

struct CorrectionResult {
  std::string record_id;
  std::string raw_output;
  TokenSequence transcript;  // postprocess(raw_output)
  std::string backend;
  double latency_ms = 0.0;
  int retries = 0;
};

class Corrector {
 public:
  virtual ~Corrector() = default;
  virtual std::string name() const = 0;
  virtual CorrectionResult correct(const CorrectionRequest& request) = 0;
};

/// Returns the ASR 1-best unchanged.
std::unique_ptr<Corrector> make_echo_best_backend();

/// Weighted confusion-network vote over the ASR+VSR union.
std::unique_ptr<Corrector> make_rover_backend();

/// Returns the reference transcript; test-only.
std::unique_ptr<Corrector> make_oracle_backend();

struct RemoteConfig {
  std::string base_url;            // e.g. http://localhost:8000
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env;         // name of the env var holding the key
  double timeout_s = 30.0;
  int max_retries = 3;
  double base_delay_s = 0.5;
  double backoff_factor = 2.0;
  int max_parallel = 4;
};

/// One chat-completion call per request; retries with exponential backoff
/// and full jitter on transport errors and 429/5xx responses.
std::unique_ptr<Corrector> make_remote_backend(const RemoteConfig& config);

std::unique_ptr<Corrector> make_backend(const std::string& name,
                                        const RemoteConfig& remote);

}  // namespace averc

#endif  // AVERC_CORRECTOR_HPP
