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

#include "averc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace averc {

using nlohmann::json;

namespace {

NBestList parse_nbest(const json& arr, Modality modality, int max_nbest,
                      int line, const std::string& field) {
  if (!arr.is_array() || arr.empty())
    throw ParseError(line, field, "expected a non-empty array");
  if (static_cast<int>(arr.size()) > max_nbest)
    throw ParseError(line, field,
                     "more than " + std::to_string(max_nbest) + " hypotheses");
  NBestList list;
  list.modality = modality;
  double prev_score = 0.0;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.contains("text") || !e["text"].is_string())
      throw ParseError(line, field + "[" + std::to_string(i) + "].text",
                       "missing or non-string");
    if (!e.contains("score") || !e["score"].is_number())
      throw ParseError(line, field + "[" + std::to_string(i) + "].score",
                       "missing or non-numeric");
    const double score = e["score"].get<double>();
    if (i > 0 && score > prev_score + 1e-12)
      throw ParseError(line, field, "scores not descending");
    prev_score = score;
    list.entries.emplace_back(e["text"].get<std::string>(), score);
  }
  return list;
}

CorruptionSpec parse_corruption(const json& obj, Stream stream, int line,
                                const std::string& field) {
  CorruptionSpec spec;
  spec.stream = stream;
  if (!obj.contains("kind") || !obj["kind"].is_string())
    throw ParseError(line, field + ".kind", "missing or non-string");
  spec.kind = obj["kind"].get<std::string>();
  if (!valid_kind(stream, spec.kind))
    throw ParseError(line, field + ".kind",
                     "unknown kind '" + spec.kind + "' for " +
                         stream_name(stream));
  if (stream == Stream::Audio) {
    if (!obj.contains("snr_db") || !obj["snr_db"].is_number())
      throw ParseError(line, field + ".snr_db",
                       "required for audio corruption");
    spec.snr_db = obj["snr_db"].get<double>();
  } else if (obj.contains("snr_db")) {
    throw ParseError(line, field + ".snr_db", "not allowed for video");
  }
  if (obj.contains("intervals")) {
    if (!obj["intervals"].is_array())
      throw ParseError(line, field + ".intervals", "expected array");
    double prev_end = 0.0;
    for (const auto& iv : obj["intervals"]) {
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() ||
          !iv[1].is_number())
        throw ParseError(line, field + ".intervals", "expected [start,end]");
      const double s = iv[0].get<double>();
      const double e = iv[1].get<double>();
      if (s < prev_end - 1e-12 || e < s || s < 0.0)
        throw ParseError(line, field + ".intervals",
                         "intervals must be sorted, non-overlapping, >= 0");
      prev_end = e;
      spec.intervals.emplace_back(s, e);
    }
  }
  return spec;
}

json corruption_to_json(const CorruptionSpec& spec) {
  json obj;
  obj["kind"] = spec.kind;
  if (spec.snr_db) obj["snr_db"] = *spec.snr_db;
  json ivs = json::array();
  for (const auto& [s, e] : spec.intervals) ivs.push_back({s, e});
  obj["intervals"] = ivs;
  return obj;
}

}  // namespace

std::vector<DualRecord> load_dataset(const std::string& path,
                                     const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open dataset " + path);
  std::vector<DualRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::string line_text;
  int line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (line_text.empty()) continue;
    json obj;
    try {
      obj = json::parse(line_text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, "<line>", e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "<line>", "not an object");

    if (!obj.contains("schema_version") ||
        !obj["schema_version"].is_number_integer())
      throw ParseError(line, "schema_version", "missing");
    if (obj["schema_version"].get<int>() != kSchemaVersion)
      throw SchemaVersionUnsupported(
          "line " + std::to_string(line) + ": version " +
          obj["schema_version"].dump());

    DualRecord rec;
    if (!obj.contains("id") || !obj["id"].is_string())
      throw ParseError(line, "id", "missing or non-string");
    rec.id = obj["id"].get<std::string>();
    if (!seen_ids.insert(rec.id).second)
      throw DuplicateId("line " + std::to_string(line) + ": id '" + rec.id +
                        "'");
    if (!obj.contains("ref") || !obj["ref"].is_string())
      throw ParseError(line, "ref", "missing or non-string");
    rec.reference = obj["ref"].get<std::string>();
    if (!obj.contains("duration_s") || !obj["duration_s"].is_number())
      throw ParseError(line, "duration_s", "missing or non-numeric");
    rec.duration_s = obj["duration_s"].get<double>();
    if (!(rec.duration_s > 0.0))
      throw ParseError(line, "duration_s", "must be > 0");

    if (!obj.contains("asr")) throw ParseError(line, "asr", "missing");
    rec.hyps.asr = parse_nbest(obj["asr"], Modality::ASR, opts.max_nbest,
                               line, "asr");
    if (!obj.contains("vsr")) throw ParseError(line, "vsr", "missing");
    rec.hyps.vsr = parse_nbest(obj["vsr"], Modality::VSR, opts.max_nbest,
                               line, "vsr");

    if (obj.contains("audio_corruption"))
      rec.audio_corruption = parse_corruption(obj["audio_corruption"],
                                              Stream::Audio, line,
                                              "audio_corruption");
    if (obj.contains("video_corruption"))
      rec.video_corruption = parse_corruption(obj["video_corruption"],
                                              Stream::Video, line,
                                              "video_corruption");

    const auto expected_k = segment_bounds(rec.duration_s).size();
    auto parse_mask = [&](const char* field, Stream stream) {
      ReliabilityMask m;
      try {
        m = mask_from_string(obj[field].get<std::string>(), stream);
      } catch (const ValidationError& e) {
        throw ParseError(line, field, e.what());
      }
      if (m.tokens.size() != expected_k)
        throw ParseError(line, field,
                         "mask length " + std::to_string(m.tokens.size()) +
                             " != ceil(duration/0.4) = " +
                             std::to_string(expected_k));
      return m;
    };
    if (obj.contains("audio_mask"))
      rec.audio_mask = parse_mask("audio_mask", Stream::Audio);
    if (obj.contains("video_mask"))
      rec.video_mask = parse_mask("video_mask", Stream::Video);

    if (obj.contains("tags")) {
      if (!obj["tags"].is_object())
        throw ParseError(line, "tags", "expected string map");
      for (const auto& [k, v] : obj["tags"].items()) {
        if (!v.is_string()) throw ParseError(line, "tags." + k, "non-string");
        rec.tags[k] = v.get<std::string>();
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_record(const DualRecord& record) {
  json obj;
  obj["schema_version"] = kSchemaVersion;
  obj["id"] = record.id;
  obj["ref"] = record.reference;
  obj["duration_s"] = record.duration_s;
  auto nbest_json = [](const NBestList& list) {
    json arr = json::array();
    for (const auto& e : list.entries)
      arr.push_back({{"text", e.text}, {"score", e.score}});
    return arr;
  };
  obj["asr"] = nbest_json(record.hyps.asr);
  obj["vsr"] = nbest_json(record.hyps.vsr);
  if (record.audio_corruption)
    obj["audio_corruption"] = corruption_to_json(*record.audio_corruption);
  if (record.video_corruption)
    obj["video_corruption"] = corruption_to_json(*record.video_corruption);
  if (record.audio_mask) obj["audio_mask"] = mask_to_string(*record.audio_mask);
  if (record.video_mask) obj["video_mask"] = mask_to_string(*record.video_mask);
  if (!record.tags.empty()) {
    json tags = json::object();
    for (const auto& [k, v] : record.tags) tags[k] = v;
    obj["tags"] = tags;
  }
  return obj.dump();
}

void save_dataset(const std::string& path,
                  const std::vector<DualRecord>& records) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw IoFailure("cannot open " + path);
  for (const auto& rec : records) out << serialize_record(rec) << '\n';
  if (!out) throw IoFailure("short write to " + path);
}

NBestList pad_nbest(const NBestList& list, int n, Rng& rng) {
  if (list.entries.empty()) throw EmptyList("pad_nbest");
  NBestList out = list;
  const std::size_t original = list.entries.size();
  while (out.entries.size() < static_cast<std::size_t>(n))
    out.entries.push_back(list.entries[rng.uniform_int(original)]);
  // Keep the descending-score invariant after appending duplicates.
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const NBestEntry& a, const NBestEntry& b) {
                     return a.score > b.score;
                   });
  return out;
}

}  // namespace averc
