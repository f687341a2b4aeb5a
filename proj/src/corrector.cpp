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

#include "averc/corrector.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "averc/confusion_net.hpp"

namespace averc {

using nlohmann::json;

namespace {

const DualRecord& require_record(const CorrectionRequest& request,
                                 const char* backend) {
  if (request.record == nullptr)
    throw ValidationError(std::string(backend) +
                          " backend needs the source record");
  return *request.record;
}

CorrectionResult finish(const CorrectionRequest& request,
                        const std::string& backend, std::string raw,
                        double latency_ms = 0.0, int retries = 0) {
  CorrectionResult res;
  res.record_id = request.record_id;
  res.raw_output = std::move(raw);
  res.transcript = postprocess(res.raw_output);
  res.backend = backend;
  res.latency_ms = latency_ms;
  res.retries = retries;
  return res;
}

class EchoBestBackend final : public Corrector {
 public:
  std::string name() const override { return "echo"; }
  CorrectionResult correct(const CorrectionRequest& request) override {
    const DualRecord& rec = require_record(request, "echo");
    if (rec.hyps.asr.entries.empty()) throw EmptyList("echo: ASR list");
    return finish(request, name(), rec.hyps.asr.entries[0].text);
  }
};

class RoverBackend final : public Corrector {
 public:
  std::string name() const override { return "rover"; }
  CorrectionResult correct(const CorrectionRequest& request) override {
    const DualRecord& rec = require_record(request, "rover");
    std::vector<TokenSequence> hyps;
    std::vector<double> scores;
    std::vector<int> lengths;
    for (const auto* e : rec.hyps.all()) {
      if (e->tokens.empty()) continue;  // empty hypotheses carry no words
      hyps.push_back(e->tokens);
      scores.push_back(e->score);
      lengths.push_back(static_cast<int>(e->tokens.size()));
    }
    if (hyps.empty()) throw EmptyList("rover: all hypotheses empty");
    const auto weights = weights_from_scores(scores, lengths);
    const auto cn = build_cn(hyps, weights);
    const TokenSequence voted = vote(cn);
    return finish(request, name(),
                  voted.empty() ? rec.hyps.asr.entries[0].text
                                : join_tokens(voted));
  }
};

class OracleBackend final : public Corrector {
 public:
  std::string name() const override { return "oracle"; }
  CorrectionResult correct(const CorrectionRequest& request) override {
    const DualRecord& rec = require_record(request, "oracle");
    return finish(request, name(), rec.reference);
  }
};

class RemoteBackend final : public Corrector {
 public:
  explicit RemoteBackend(RemoteConfig config)
      : cfg_(std::move(config)), jitter_(std::random_device{}()) {
    if (!cfg_.api_key_env.empty()) {
      const char* key = std::getenv(cfg_.api_key_env.c_str());
      if (key == nullptr || *key == '\0')
        throw AuthMissing("environment variable " + cfg_.api_key_env +
                          " is not set");
      api_key_ = key;
    }
  }

  std::string name() const override { return "remote"; }

  CorrectionResult correct(const CorrectionRequest& request) override {
    const auto start = std::chrono::steady_clock::now();
    int attempt = 0;
    std::string last_error;
    while (attempt <= cfg_.max_retries) {
      if (attempt > 0) {
        // Full jitter: uniform in [0, base * factor^(attempt-1)].
        const double cap =
            cfg_.base_delay_s *
            std::pow(cfg_.backoff_factor, static_cast<double>(attempt - 1));
        std::uniform_real_distribution<double> dist(0.0, cap);
        std::this_thread::sleep_for(
            std::chrono::duration<double>(dist(jitter_)));
      }
      ++attempt;
      try {
        std::string raw = call_once(request);
        const auto elapsed =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
        return finish(request, name(), std::move(raw), elapsed, attempt - 1);
      } catch (const MalformedResponse&) {
        throw;  // not transient
      } catch (const TransportError& e) {
        last_error = e.what();
      }
    }
    throw TransportError("Transport: giving up after " +
                         std::to_string(cfg_.max_retries + 1) + " attempts (" +
                         last_error + ")");
  }

 private:
  std::string call_once(const CorrectionRequest& request) {
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));
    httplib::Headers headers;
    if (!api_key_.empty())
      headers.emplace("Authorization", "Bearer " + api_key_);

    json body;
    body["model"] = cfg_.model;
    body["messages"] = json::array(
        {json{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;

    auto res = client.Post(cfg_.path, headers, body.dump(),
                           "application/json");
    if (!res)
      throw TransportError("Transport: no response from " + cfg_.base_url);
    if (res->status == 429 || res->status >= 500)
      throw TransportError("Transport: HTTP " + std::to_string(res->status));
    if (res->status != 200)
      throw MalformedResponse("HTTP " + std::to_string(res->status) + ": " +
                              res->body);
    json obj;
    try {
      obj = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw MalformedResponse(e.what());
    }
    if (!obj.contains("choices") || !obj["choices"].is_array() ||
        obj["choices"].empty() ||
        !obj["choices"][0].contains("message") ||
        !obj["choices"][0]["message"].contains("content") ||
        !obj["choices"][0]["message"]["content"].is_string())
      throw MalformedResponse("missing choices[0].message.content");
    return obj["choices"][0]["message"]["content"].get<std::string>();
  }

  RemoteConfig cfg_;
  std::string api_key_;
  std::mt19937_64 jitter_;
};

}  // namespace

std::unique_ptr<Corrector> make_echo_best_backend() {
  return std::make_unique<EchoBestBackend>();
}

std::unique_ptr<Corrector> make_rover_backend() {
  return std::make_unique<RoverBackend>();
}

std::unique_ptr<Corrector> make_oracle_backend() {
  return std::make_unique<OracleBackend>();
}

std::unique_ptr<Corrector> make_remote_backend(const RemoteConfig& config) {
  return std::make_unique<RemoteBackend>(config);
}

std::unique_ptr<Corrector> make_backend(const std::string& name,
                                        const RemoteConfig& remote) {
  if (name == "echo") return make_echo_best_backend();
  if (name == "rover") return make_rover_backend();
  if (name == "oracle") return make_oracle_backend();
  if (name == "remote") return make_remote_backend(remote);
  throw ValidationError("unknown backend '" + name + "'");
}

}  // namespace averc
