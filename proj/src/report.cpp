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

#include "averc/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace averc {

using nlohmann::json;

double EvalReport::system_wer(const GroupReport& g,
                              const std::string& system) const {
  auto it = g.systems.find(system);
  if (it == g.systems.end()) throw UnknownBaseline("system '" + system + "'");
  return per_utterance_mean ? it->second.mean_wer() : it->second.corpus_wer();
}

std::optional<double> EvalReport::werr(const GroupReport& g,
                                       const std::string& system) const {
  if (system == baseline) return std::nullopt;
  const double bl = system_wer(g, baseline);
  if (bl == 0.0) return std::nullopt;
  return (bl - system_wer(g, system)) / bl;
}

EvalReport run_eval(const std::vector<DualRecord>& records,
                    const std::map<std::string, SystemOutputs>& systems,
                    const EvalOptions& opts) {
  EvalReport report;
  report.baseline = opts.baseline;
  report.per_utterance_mean = opts.per_utterance_mean;

  std::vector<std::string> system_names{kAsrBaselineName};
  for (const auto& [name, outputs] : systems) {
    (void)outputs;
    if (name != kAsrBaselineName) system_names.push_back(name);
  }
  if (std::find(system_names.begin(), system_names.end(), opts.baseline) ==
      system_names.end())
    throw UnknownBaseline("'" + opts.baseline + "' is not among the systems");

  std::map<std::string, GroupReport> groups;
  GroupReport overall;
  overall.group = "Overall";

  for (const DualRecord& rec : records) {
    const TokenSequence ref = rec.ref_tokens();
    bool usable = !ref.empty() && !rec.hyps.asr.entries.empty() &&
                  !rec.hyps.vsr.entries.empty();
    std::vector<std::pair<std::string, const TokenSequence*>> outs;
    if (usable) {
      for (const auto& name : system_names) {
        if (name == kAsrBaselineName) {
          outs.emplace_back(name, &rec.hyps.asr.entries[0].tokens);
          continue;
        }
        const auto& outputs = systems.at(name);
        auto it = outputs.find(rec.id);
        if (it == outputs.end()) {
          usable = false;
          break;
        }
        outs.emplace_back(name, &it->second);
      }
    }
    if (!usable) {
      ++report.skipped;
      report.skipped_ids.push_back(rec.id);
      continue;
    }
    ++report.evaluated;

    std::string key = "all";
    if (!opts.group_by.empty()) {
      auto it = rec.tags.find(opts.group_by);
      key = it == rec.tags.end() ? "(untagged)" : it->second;
    }
    auto& group = groups[key];
    if (group.group.empty()) group.group = key;

    for (GroupReport* g : {&group, &overall}) {
      ++g->records;
      for (const auto& [name, tokens] : outs)
        g->systems[name].add(edit_distance(ref, *tokens),
                             static_cast<int>(ref.size()));
      g->oracles.add(ref, rec.hyps);
    }
  }

  for (auto& [key, group] : groups) {
    (void)key;
    report.groups.push_back(std::move(group));
  }
  report.groups.push_back(std::move(overall));
  return report;
}

std::vector<std::pair<double, double>> werr_curve(
    const std::vector<DualRecord>& records, const SystemOutputs& system,
    const SystemOutputs& baseline, const std::vector<double>& snr_buckets) {
  if (snr_buckets.empty()) throw ValidationError("no SNR buckets given");
  struct Accum {
    CorpusWerAccum sys, bl;
  };
  std::map<double, Accum> accums;
  for (const DualRecord& rec : records) {
    std::optional<double> snr;
    if (rec.audio_corruption && rec.audio_corruption->snr_db)
      snr = rec.audio_corruption->snr_db;
    if (!snr) {
      auto it = rec.tags.find("snr_db");
      if (it != rec.tags.end()) snr = std::stod(it->second);
    }
    if (!snr) throw MissingSnr("record '" + rec.id + "' carries no SNR");
    const TokenSequence ref = rec.ref_tokens();
    if (ref.empty()) continue;
    auto sys_it = system.find(rec.id);
    auto bl_it = baseline.find(rec.id);
    if (sys_it == system.end() || bl_it == baseline.end()) continue;
    // Nearest bucket center.
    double best = snr_buckets[0];
    for (double b : snr_buckets)
      if (std::abs(b - *snr) < std::abs(best - *snr)) best = b;
    auto& acc = accums[best];
    acc.sys.add(edit_distance(ref, sys_it->second),
                static_cast<int>(ref.size()));
    acc.bl.add(edit_distance(ref, bl_it->second),
               static_cast<int>(ref.size()));
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& [snr, acc] : accums) {
    const double bl = acc.bl.corpus_wer();
    if (bl == 0.0) continue;
    out.emplace_back(snr, (bl - acc.sys.corpus_wer()) / bl);
  }
  return out;
}

std::string format_wer_cell(double wer, std::optional<double> werr) {
  std::string cell = format_percent(wer);
  if (werr) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    const double pct = *werr * 100.0;
    if (pct == 0.0)
      os << 0.0;
    else
      os << (pct > 0.0 ? "-" : "+") << std::abs(pct);
    cell += " (" + os.str() + "%)";
  }
  return cell;
}

namespace {

std::vector<std::string> system_names(const EvalReport& report) {
  std::vector<std::string> names;
  if (!report.groups.empty())
    for (const auto& [name, acc] : report.groups.back().systems) {
      (void)acc;
      names.push_back(name);
    }
  // Baseline column first.
  auto it = std::find(names.begin(), names.end(), report.baseline);
  if (it != names.end()) std::rotate(names.begin(), it, it + 1);
  return names;
}

std::string oracle_cols(const OracleRow& row) {
  return format_percent(row.onb.corpus_wer()) + " / " +
         format_percent(row.ocp.corpus_wer());
}

}  // namespace

std::string emit_markdown(const EvalReport& report) {
  const auto names = system_names(report);
  std::ostringstream out;
  out << "| Group | Records |";
  for (const auto& n : names) out << ' ' << n << " |";
  out << " o_nb/o_cp (A) | o_nb/o_cp (V) | o_nb/o_cp (A+V) |\n";
  out << "|---|---|";
  for (std::size_t i = 0; i < names.size() + 3; ++i) out << "---|";
  out << '\n';
  for (const auto& g : report.groups) {
    out << "| " << g.group << " | " << g.records << " |";
    for (const auto& n : names)
      out << ' ' << format_wer_cell(report.system_wer(g, n), report.werr(g, n))
          << " |";
    out << ' ' << oracle_cols(g.oracles.asr) << " | "
        << oracle_cols(g.oracles.vsr) << " | " << oracle_cols(g.oracles.dual)
        << " |\n";
  }
  out << "\nBaseline: " << report.baseline << ". Evaluated "
      << report.evaluated << " records, skipped " << report.skipped << ".\n";
  return out.str();
}

std::string emit_csv(const EvalReport& report) {
  const auto names = system_names(report);
  std::ostringstream out;
  out.precision(12);
  out << "group,records";
  for (const auto& n : names) out << ',' << n << "_wer," << n << "_werr";
  out << ",onb_a,ocp_a,onb_v,ocp_v,onb_av,ocp_av\n";
  for (const auto& g : report.groups) {
    out << g.group << ',' << g.records;
    for (const auto& n : names) {
      out << ',' << report.system_wer(g, n) << ',';
      // Signed relative change, negative = improvement, matching the
      // rendered "(-48.8%)" convention.
      const auto w = report.werr(g, n);
      if (w) out << (*w == 0.0 ? 0.0 : -*w);
    }
    out << ',' << g.oracles.asr.onb.corpus_wer() << ','
        << g.oracles.asr.ocp.corpus_wer() << ','
        << g.oracles.vsr.onb.corpus_wer() << ','
        << g.oracles.vsr.ocp.corpus_wer() << ','
        << g.oracles.dual.onb.corpus_wer() << ','
        << g.oracles.dual.ocp.corpus_wer() << '\n';
  }
  return out.str();
}

void save_results(const std::string& path, const std::string& backend,
                  const std::vector<std::pair<std::string, std::string>>&
                      id_and_output) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path);
  // Stable order regardless of completion order.
  auto sorted = id_and_output;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [id, text] : sorted) {
    json obj{{"id", id}, {"backend", backend}, {"output", text}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoFailure("short write to " + path);
}

std::pair<std::string, SystemOutputs> load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open results " + path);
  SystemOutputs outputs;
  std::string backend;
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
    if (!obj.contains("id") || !obj.contains("output"))
      throw ParseError(line, "id/output", "missing");
    if (backend.empty() && obj.contains("backend"))
      backend = obj["backend"].get<std::string>();
    outputs[obj["id"].get<std::string>()] =
        normalize(obj["output"].get<std::string>());
  }
  return {backend, outputs};
}

}  // namespace averc
