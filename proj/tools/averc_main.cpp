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

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "averc/corrector.hpp"
#include "averc/dataset.hpp"
#include "averc/report.hpp"

namespace {

using namespace averc;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path);
  out << text;
  if (!out) throw IoFailure("short write to " + path);
}

// ---- wer ----

int cmd_wer(const std::string& ref, const std::string& hyp) {
  const auto r = normalize(ref);
  const auto h = normalize(hyp);
  const Alignment a = align(r, h);
  const std::string pct = format_percent(wer(r, h));
  std::cout << "WER " << pct << "%  (C=" << a.correct
            << " S=" << a.substitutions << " D=" << a.deletions
            << " I=" << a.insertions << ", ref " << r.size() << " words)\n";
  return 0;
}

// ---- oracle ----

int cmd_oracle(const std::string& dataset_path, const std::string& streams) {
  const auto records = load_dataset(dataset_path);
  OracleTable table;
  for (const auto& rec : records) table.add(rec.ref_tokens(), rec.hyps);
  auto print_row = [](const OracleRow& row) {
    std::cout << row.label << "\t" << format_percent(row.best1.corpus_wer())
              << "\t" << format_percent(row.onb.corpus_wer()) << "\t"
              << format_percent(row.ocp.corpus_wer()) << "\n";
  };
  std::cout << "Input\t1-best\to_nb\to_cp\n";
  if (streams.find('a') != std::string::npos) print_row(table.asr);
  if (streams.find('v') != std::string::npos) print_row(table.vsr);
  if (streams.find("av") != std::string::npos ||
      streams.find("a,v") != std::string::npos || streams == "all")
    print_row(table.dual);
  std::cout << "(" << table.records << " records)\n";
  return 0;
}

// ---- corrupt ----

ProtocolConfig protocol_from_json(const json& cfg) {
  ProtocolConfig pc;
  const std::string mode = cfg.value("mode", "train");
  if (mode == "train")
    pc.mode = ProtocolMode::TrainRandom;
  else if (mode == "eval_audio_full")
    pc.mode = ProtocolMode::EvalAudioFull;
  else if (mode == "eval_video_portion")
    pc.mode = ProtocolMode::EvalVideoPortion;
  else
    throw ValidationError("unknown mode '" + mode + "'");
  if (cfg.contains("snr_range")) {
    pc.snr_lo_db = cfg["snr_range"][0].get<double>();
    pc.snr_hi_db = cfg["snr_range"][1].get<double>();
  }
  if (cfg.contains("beta")) {
    pc.beta_alpha = cfg["beta"][0].get<double>();
    pc.beta_beta = cfg["beta"][1].get<double>();
  }
  if (cfg.contains("fixed_portion"))
    pc.fixed_portion = cfg["fixed_portion"].get<double>();
  if (cfg.contains("interval_count"))
    pc.interval_count = cfg["interval_count"].get<int>();
  validate(pc);
  return pc;
}

int cmd_corrupt(const std::string& config_path, const std::string& out_path,
                std::uint64_t seed) {
  const json cfg = json::parse(read_file(config_path));
  const ProtocolConfig pc = protocol_from_json(cfg);
  if (!cfg.contains("dataset"))
    throw ValidationError("config needs a 'dataset' path");
  auto records = load_dataset(cfg["dataset"].get<std::string>());

  bool do_audio = true, do_video = true;
  const bool one_stream_per_record =
      cfg.value("one_stream_per_record",
                pc.mode == ProtocolMode::TrainRandom);
  if (cfg.contains("streams")) {
    do_audio = do_video = false;
    for (const auto& s : cfg["streams"]) {
      if (s == "audio") do_audio = true;
      if (s == "video") do_video = true;
    }
  }

  for (auto& rec : records) {
    Rng rng = stream_for(seed, rec.id);
    bool audio = do_audio, video = do_video;
    if (one_stream_per_record && audio && video) {
      if (rng.uniform_int(2) == 0)
        video = false;
      else
        audio = false;
    }
    if (audio) {
      rec.audio_corruption =
          sample_corruption(rec.duration_s, Stream::Audio, pc, rng);
      rec.tags["noise"] = rec.audio_corruption->kind;
      std::ostringstream snr;
      snr.precision(12);
      snr << *rec.audio_corruption->snr_db;
      rec.tags["snr_db"] = snr.str();
    }
    if (video) {
      rec.video_corruption =
          sample_corruption(rec.duration_s, Stream::Video, pc, rng);
      rec.tags["visual"] = rec.video_corruption->kind;
    }
  }
  save_dataset(out_path, records);
  std::cout << "wrote " << records.size() << " records to " << out_path
            << "\n";
  return 0;
}

// ---- mask gen / eval / train ----

int cmd_mask_gen(const std::string& dataset_path, const std::string& out_path) {
  auto records = load_dataset(dataset_path);
  for (auto& rec : records) {
    CorruptionSpec none_audio{Stream::Audio, "babble", 0.0, {}};
    CorruptionSpec none_video{Stream::Video, "object", std::nullopt, {}};
    rec.audio_mask = label_mask(
        rec.audio_corruption ? *rec.audio_corruption : none_audio,
        rec.duration_s);
    rec.video_mask = label_mask(
        rec.video_corruption ? *rec.video_corruption : none_video,
        rec.duration_s);
  }
  save_dataset(out_path, records);
  std::cout << "wrote " << records.size() << " records to " << out_path
            << "\n";
  return 0;
}

void print_metrics(const std::string& label, const MaskMetrics& m) {
  std::cout << label << "\tacc " << format_percent(m.accuracy) << "\tprec "
            << format_percent(m.precision) << "\trec "
            << format_percent(m.recall) << "\tf1 " << format_percent(m.f1)
            << "\t(" << m.segments << " segments)";
  if (!m.precision_defined) std::cout << "\t[no positives predicted]";
  std::cout << "\n";
}

int cmd_mask_eval(const std::string& pred_path, const std::string& gt_path) {
  const auto pred = load_dataset(pred_path);
  const auto gt = load_dataset(gt_path);
  std::unordered_map<std::string, const DualRecord*> gt_by_id;
  for (const auto& rec : gt) gt_by_id[rec.id] = &rec;
  std::vector<ReliabilityMask> pa, ga, pv, gv, pall, gall;
  for (const auto& rec : pred) {
    auto it = gt_by_id.find(rec.id);
    if (it == gt_by_id.end())
      throw ValidationError("record '" + rec.id + "' missing from gt");
    const DualRecord& g = *it->second;
    if (rec.audio_mask && g.audio_mask) {
      pa.push_back(*rec.audio_mask);
      ga.push_back(*g.audio_mask);
      pall.push_back(*rec.audio_mask);
      gall.push_back(*g.audio_mask);
    }
    if (rec.video_mask && g.video_mask) {
      pv.push_back(*rec.video_mask);
      gv.push_back(*g.video_mask);
      pall.push_back(*rec.video_mask);
      gall.push_back(*g.video_mask);
    }
  }
  if (!pa.empty()) print_metrics("audio", eval_masks(pa, ga));
  if (!pv.empty()) print_metrics("video", eval_masks(pv, gv));
  if (!pall.empty()) print_metrics("pooled", eval_masks(pall, gall));
  return 0;
}

int cmd_mask_train(const std::string& features_dir,
                   const std::string& labels_path, const std::string& out_path,
                   double lr, int epochs, double l2, double frame_rate) {
  const auto records = load_dataset(labels_path);
  std::vector<std::vector<double>> x;
  std::vector<RelLabel> y;
  for (const auto& rec : records) {
    for (const auto stream : {Stream::Audio, Stream::Video}) {
      const auto& mask =
          stream == Stream::Audio ? rec.audio_mask : rec.video_mask;
      if (!mask) continue;
      const std::string path = features_dir + "/" + rec.id + "." +
                               stream_name(stream) + ".feat";
      std::ifstream probe(path);
      if (!probe) continue;
      SegmentFeatures feats;
      feats.rows = read_feature_file(path);
      feats.frame_rate_hz = frame_rate;
      feats.stream = stream;
      auto pooled = pool_features(feats, rec.duration_s);
      if (pooled.size() != mask->tokens.size())
        throw LengthMismatch("record '" + rec.id +
                             "': pooled segments vs mask length");
      for (std::size_t i = 0; i < pooled.size(); ++i) {
        x.push_back(std::move(pooled[i]));
        y.push_back(mask->tokens[i]);
      }
    }
  }
  if (x.empty()) throw ValidationError("no (features, label) pairs found");
  TrainOptions opts;
  opts.learning_rate = lr;
  opts.epochs = epochs;
  opts.l2 = l2;
  const PredictorModel model = train_predictor(x, y, opts);
  json obj;
  obj["classes"] = {"C", "N", "M"};
  obj["weights"] = model.weights;
  obj["bias"] = model.bias;
  obj["epochs"] = model.epochs;
  obj["learning_rate"] = model.learning_rate;
  obj["final_loss"] = model.final_loss;
  write_file(out_path, obj.dump(2) + "\n");
  std::cout << "trained on " << x.size() << " segments, final loss "
            << model.final_loss << ", wrote " << out_path << "\n";
  return 0;
}

// ---- prompt ----

int cmd_prompt(const std::string& variant_name, const std::string& record_id,
               const std::string& dataset_path) {
  const auto variant = prompt_variant_from_name(variant_name);
  if (!variant) throw ValidationError("unknown variant '" + variant_name + "'");
  const auto records = load_dataset(dataset_path);
  for (const auto& rec : records) {
    if (rec.id != record_id) continue;
    std::optional<MaskPair> masks;
    if (*variant == PromptVariant::RelPrompt) {
      if (!rec.audio_mask || !rec.video_mask)
        throw MissingMasks("record '" + record_id + "' lacks masks");
      masks = MaskPair{*rec.audio_mask, *rec.video_mask};
    }
    std::cout << build_prompt(*variant, rec.hyps, masks) << "\n";
    return 0;
  }
  throw ValidationError("record '" + record_id + "' not found");
}

// ---- correct ----

RemoteConfig remote_from_file(const std::string& path) {
  RemoteConfig rc;
  if (path.empty()) return rc;
  const json cfg = json::parse(read_file(path));
  rc.base_url = cfg.value("base_url", "");
  rc.path = cfg.value("path", rc.path);
  rc.model = cfg.value("model", "");
  rc.api_key_env = cfg.value("api_key_env", "");
  rc.timeout_s = cfg.value("timeout_s", rc.timeout_s);
  rc.max_retries = cfg.value("max_retries", rc.max_retries);
  rc.max_parallel = cfg.value("max_parallel", rc.max_parallel);
  return rc;
}

int cmd_correct(const std::string& backend_name,
                const std::string& dataset_path, const std::string& out_path,
                int jobs, const std::string& config_path,
                const std::string& variant_name) {
  const auto records = load_dataset(dataset_path);
  const RemoteConfig remote = remote_from_file(config_path);
  const auto variant = prompt_variant_from_name(variant_name);
  if (!variant) throw ValidationError("unknown variant '" + variant_name + "'");

  std::vector<std::pair<std::string, std::string>> outputs(records.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::vector<std::string> errors;

  auto worker = [&]() {
    auto backend = make_backend(backend_name, remote);
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) break;
      const DualRecord& rec = records[i];
      try {
        CorrectionRequest req;
        req.record_id = rec.id;
        req.record = &rec;
        std::optional<MaskPair> masks;
        PromptVariant effective = *variant;
        if (effective == PromptVariant::RelPrompt) {
          if (rec.audio_mask && rec.video_mask)
            masks = MaskPair{*rec.audio_mask, *rec.video_mask};
          else
            effective = PromptVariant::DualHyp;  // degrade without masks
        }
        req.prompt = build_prompt(effective, rec.hyps, masks);
        const CorrectionResult res = backend->correct(req);
        outputs[i] = {rec.id, join_tokens(res.transcript)};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        errors.push_back(rec.id + ": " + e.what());
        outputs[i] = {rec.id, ""};
      }
    }
  };

  const int n_threads =
      std::max(1, backend_name == "remote" ? std::min(jobs, remote.max_parallel)
                                           : jobs);
  std::vector<std::thread> threads;
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::vector<std::pair<std::string, std::string>> ok;
  for (auto& [id, text] : outputs)
    if (!text.empty()) ok.emplace_back(id, text);
  save_results(out_path, backend_name, ok);
  std::cout << "corrected " << ok.size() << "/" << records.size()
            << " records with backend " << backend_name << "\n";
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
  if (!errors.empty() && backend_name == "remote") return 2;
  return errors.empty() ? 0 : 1;
}

// ---- report ----

int cmd_report(const std::string& dataset_path,
               const std::vector<std::string>& result_paths,
               const std::string& baseline, const std::string& format,
               const std::string& group_by, bool werr_by_snr,
               const std::string& out_path, bool per_utterance_mean) {
  const auto records = load_dataset(dataset_path);
  std::map<std::string, SystemOutputs> systems;
  for (const auto& path : result_paths) {
    auto [backend, outputs] = load_results(path);
    if (backend.empty()) backend = path;
    systems[backend] = std::move(outputs);
  }
  EvalOptions opts;
  opts.group_by = group_by;
  opts.baseline = baseline.empty() ? kAsrBaselineName : baseline;
  opts.per_utterance_mean = per_utterance_mean;
  const EvalReport report = run_eval(records, systems, opts);
  std::string text =
      format == "csv" ? emit_csv(report) : emit_markdown(report);

  if (werr_by_snr) {
    SystemOutputs baseline_out;
    for (const auto& rec : records)
      if (!rec.hyps.asr.entries.empty())
        baseline_out[rec.id] = rec.hyps.asr.entries[0].tokens;
    const std::vector<double> buckets{-10, -5, 0, 5, 10};
    text += "\nsnr_db,system,werr\n";
    for (const auto& [name, outputs] : systems) {
      const auto& bl = opts.baseline == kAsrBaselineName
                           ? baseline_out
                           : systems.at(opts.baseline);
      for (const auto& [snr, werr] : werr_curve(records, outputs, bl, buckets)) {
        std::ostringstream row;
        row.precision(12);
        row << snr << ',' << name << ',' << werr << '\n';
        text += row.str();
      }
    }
  }

  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-stream ASR/VSR hypothesis evaluation toolkit"};
  app.require_subcommand(1);

  // wer
  std::string ref_text, hyp_text;
  auto* wer_cmd = app.add_subcommand("wer", "Score one hypothesis");
  wer_cmd->add_option("ref", ref_text)->required();
  wer_cmd->add_option("hyp", hyp_text)->required();

  // oracle
  std::string dataset_path, streams = "a,v,av";
  auto* oracle_cmd = app.add_subcommand("oracle", "Corpus oracle analysis");
  oracle_cmd->add_option("--dataset", dataset_path)->required();
  oracle_cmd->add_option("--streams", streams);

  // corrupt
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  auto* corrupt_cmd =
      app.add_subcommand("corrupt", "Sample corruption metadata");
  corrupt_cmd->add_option("--config", config_path)->required();
  corrupt_cmd->add_option("--out", out_path)->required();
  corrupt_cmd->add_option("--seed", seed)->required();

  // mask
  auto* mask_cmd = app.add_subcommand("mask", "Reliability masks");
  mask_cmd->require_subcommand(1);
  std::string mask_dataset, mask_out, pred_path, gt_path;
  auto* mask_gen = mask_cmd->add_subcommand("gen", "Label ground-truth masks");
  mask_gen->add_option("--dataset", mask_dataset)->required();
  mask_gen->add_option("--out", mask_out)->required();
  auto* mask_eval = mask_cmd->add_subcommand("eval", "Score predicted masks");
  mask_eval->add_option("--pred", pred_path)->required();
  mask_eval->add_option("--gt", gt_path)->required();
  std::string features_dir, labels_path, model_out;
  double lr = 1e-2, l2 = 0.0, frame_rate = 25.0;
  int epochs = 500;
  auto* mask_train =
      mask_cmd->add_subcommand("train", "Train the reliability predictor");
  mask_train->add_option("--features", features_dir)->required();
  mask_train->add_option("--labels", labels_path)->required();
  mask_train->add_option("--out", model_out)->required();
  mask_train->add_option("--lr", lr);
  mask_train->add_option("--epochs", epochs);
  mask_train->add_option("--l2", l2);
  mask_train->add_option("--frame-rate", frame_rate);

  // prompt
  std::string variant = "relprompt", record_id, prompt_dataset;
  auto* prompt_cmd = app.add_subcommand("prompt", "Print one prompt");
  prompt_cmd->add_option("--variant", variant)
      ->check(CLI::IsMember({"ger", "dualhyp", "relprompt"}));
  prompt_cmd->add_option("--record", record_id)->required();
  prompt_cmd->add_option("--dataset", prompt_dataset)->required();

  // correct
  std::string backend, correct_dataset, correct_out, correct_config;
  std::string correct_variant = "relprompt";
  int jobs = 1;
  auto* correct_cmd = app.add_subcommand("correct", "Run a corrector backend");
  correct_cmd->add_option("--backend", backend)
      ->required()
      ->check(CLI::IsMember({"remote", "echo", "rover", "oracle"}));
  correct_cmd->add_option("--dataset", correct_dataset)->required();
  correct_cmd->add_option("--out", correct_out)->required();
  correct_cmd->add_option("--jobs", jobs);
  correct_cmd->add_option("--config", correct_config);
  correct_cmd->add_option("--variant", correct_variant)
      ->check(CLI::IsMember({"ger", "dualhyp", "relprompt"}));

  // report
  std::string report_dataset, report_baseline, report_format = "md";
  std::string report_group_by, report_out;
  std::vector<std::string> result_paths;
  bool werr_by_snr = false, mean_flag = false;
  auto* report_cmd = app.add_subcommand("report", "Evaluation report");
  report_cmd->add_option("--dataset", report_dataset)->required();
  report_cmd->add_option("--results", result_paths)->required();
  report_cmd->add_option("--baseline", report_baseline);
  report_cmd->add_option("--format", report_format)
      ->check(CLI::IsMember({"md", "csv"}));
  report_cmd->add_option("--group-by", report_group_by);
  report_cmd->add_option("--out", report_out);
  report_cmd->add_flag("--werr-by-snr", werr_by_snr);
  report_cmd->add_flag("--per-utterance-mean", mean_flag);

  CLI11_PARSE(app, argc, argv);

  try {
    if (wer_cmd->parsed()) return cmd_wer(ref_text, hyp_text);
    if (oracle_cmd->parsed()) return cmd_oracle(dataset_path, streams);
    if (corrupt_cmd->parsed()) return cmd_corrupt(config_path, out_path, seed);
    if (mask_gen->parsed()) return cmd_mask_gen(mask_dataset, mask_out);
    if (mask_eval->parsed()) return cmd_mask_eval(pred_path, gt_path);
    if (mask_train->parsed())
      return cmd_mask_train(features_dir, labels_path, model_out, lr, epochs,
                            l2, frame_rate);
    if (prompt_cmd->parsed())
      return cmd_prompt(variant, record_id, prompt_dataset);
    if (correct_cmd->parsed())
      return cmd_correct(backend, correct_dataset, correct_out, jobs,
                         correct_config, correct_variant);
    if (report_cmd->parsed())
      return cmd_report(report_dataset, result_paths, report_baseline,
                        report_format, report_group_by, werr_by_snr,
                        report_out, mean_flag);
  } catch (const averc::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 2;
  } catch (const averc::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
