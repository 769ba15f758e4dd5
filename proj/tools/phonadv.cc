// tools/phonadv.cc

// Copyright 2026  phonadv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: generate, train, evaluate, report, ablate, augment,
// attack.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phonadv/config.h"
#include "phonadv/pipeline.h"

namespace {

using namespace phonadv;
namespace fs = std::filesystem;

struct Overrides {
  std::string config;
  std::optional<std::string> mode;
  std::optional<double> epsilon;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> data;
};

void AddCommon(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run config")->check(CLI::ExistingFile);
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--data", o.data, "corpus directory (default: paths.data_dir)");
}

RunConfig Resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig() : LoadRunConfig(o.config);
  if (o.mode) {
    try {
      cfg.train.mode = ParseMode(*o.mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--mode: ") + e.what());
    }
  }
  if (o.epsilon) {
    cfg.train.attack.epsilon = *o.epsilon;
    cfg.train.attack.alpha = *o.epsilon;
  }
  if (o.seed) cfg.train.seed = *o.seed;
  if (o.threads) cfg.train.threads = *o.threads;
  if (o.out) cfg.out_dir = *o.out;
  if (o.data) cfg.data_dir = *o.data;
  cfg.SyncMode();
  cfg.Validate();
  return cfg;
}

void WriteText(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

void RequireFile(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw std::runtime_error(what + " not found: " + p.string());
}

void RequireBenchmark(const fs::path& dir, bool train_only) {
  RequireFile(dir / "train.tsv", "training corpus");
  if (train_only) return;
  RequireFile(dir / "test.tsv", "test corpus");
  for (const auto& d : DefaultDomains()) RequireFile(dir / (d.name + ".tsv"), "domain corpus");
}

int CmdGenerate(const Overrides& o, std::optional<uint64_t> corpus_seed) {
  RunConfig cfg = Resolve(o);
  if (corpus_seed) cfg.corpus.seed = *corpus_seed;
  const fs::path dir = o.out ? fs::path(*o.out) : cfg.data_dir;
  const Frontend frontend(cfg.frontend);
  const Benchmark b = GenerateBenchmark(cfg, frontend);
  WriteBenchmark(b, dir);
  std::cout << "generated " << b.train.size() << " train, " << b.val.size() << " val, "
            << b.test.size() << " test and " << b.domains.size() << " domain splits in "
            << dir.string() << "\n";
  return 0;
}

int CmdTrain(const Overrides& o) {
  const RunConfig cfg = Resolve(o);
  RequireBenchmark(cfg.data_dir, true);
  const Frontend frontend(cfg.frontend);
  const Vocabulary vocab = ConfigVocabulary(cfg);
  const Corpus train = LoadCorpus(cfg.data_dir / "train.tsv", vocab);
  const NoiseBank noise = TrainingNoise(cfg);
  const TrainResult r = Train(cfg.train, train, frontend, noise,
                              InitialState(cfg.train, frontend, vocab.size(), train));

  std::ostringstream log;
  for (const auto& e : r.log) log << e.ToJsonLine() << '\n';
  fs::create_directories(cfg.out_dir);
  WriteText(cfg.out_dir / "train_log.jsonl", log.str());
  WriteText(cfg.out_dir / "config.json", RunConfigToJson(cfg));
  SaveCheckpoint(r.state, cfg.out_dir / "checkpoint.bin");

  nlohmann::ordered_json summary;
  summary["mode"] = std::string(ModeName(cfg.train.mode));
  summary["epsilon"] = cfg.train.attack.epsilon;
  summary["steps"] = r.log.size();
  summary["final_clean_loss"] = r.log.empty() ? 0.0 : r.log.back().clean_loss;
  summary["skipped"] = r.skipped;
  std::cout << summary.dump() << "\n";
  return 0;
}

int CmdEvaluate(const Overrides& o, const std::string& checkpoint, const std::string& baseline) {
  const RunConfig cfg = Resolve(o);
  const fs::path ckpt = checkpoint.empty() ? cfg.out_dir / "checkpoint.bin" : fs::path(checkpoint);
  RequireFile(ckpt, "checkpoint");
  RequireBenchmark(cfg.data_dir, false);
  std::optional<EvalResult> base;
  if (!baseline.empty()) {
    RequireFile(baseline, "baseline result");
    base = LoadEvalResult(baseline);
  }
  const ModelState state = LoadCheckpoint(ckpt);
  const Frontend frontend(cfg.frontend);
  const Vocabulary vocab = ConfigVocabulary(cfg);
  if (state.layout.input_dim != cfg.frontend.d || state.layout.vocab != vocab.size())
    throw CheckpointError("checkpoint " + ckpt.string() + ": layout does not match the config");
  Benchmark b;
  b.test = LoadCorpus(cfg.data_dir / "test.tsv", vocab);
  for (const auto& d : DefaultDomains())
    b.domains.push_back({d.name, LoadCorpus(cfg.data_dir / (d.name + ".tsv"), vocab)});
  const EvalResult r = Evaluate(state, frontend, b.Suites(), vocab, cfg.train.threads);

  WriteText(cfg.out_dir / "wer_report.csv", WerReportCsv(r));
  WriteText(cfg.out_dir / "eval_result.json", EvalResultToJson(r));
  if (base) WriteText(cfg.out_dir / "drop_rate.csv", DropRateCsv(*base, r));
  std::cout << WerReportCsv(r);
  return 0;
}

int CmdReport(const std::string& baseline, const std::string& treated, const std::string& out) {
  RequireFile(baseline, "baseline result");
  RequireFile(treated, "treated result");
  const EvalResult b = LoadEvalResult(baseline);
  const EvalResult t = LoadEvalResult(treated);
  const std::string csv = DropRateCsv(b, t);
  if (!out.empty()) WriteText(fs::path(out) / "drop_rate.csv", csv);
  std::cout << csv;
  return 0;
}

int CmdAblate(const Overrides& o, const std::vector<double>& epsilons) {
  const RunConfig cfg = Resolve(o);
  RequireBenchmark(cfg.data_dir, false);
  const Frontend frontend(cfg.frontend);
  const Vocabulary vocab = ConfigVocabulary(cfg);
  const Benchmark b = LoadBenchmark(cfg.data_dir, vocab);
  const double eps = cfg.train.attack.epsilon;
  std::vector<AblationVariant> variants{{"no_at", TrainMode::kNoAt, 0.0},
                                        {"pat", TrainMode::kPat, eps},
                                        {"wapat", TrainMode::kWapat, eps}};
  for (double e : epsilons) variants.push_back({"wapat", TrainMode::kWapat, e});
  const auto rows = RunAblation(cfg.train, variants, b.train, frontend, TrainingNoise(cfg),
                                b.Suites(), vocab);
  const std::string csv = AblationTableCsv(rows);
  WriteText(cfg.out_dir / "ablation.csv", csv);
  std::cout << csv;
  for (const auto& r : rows)
    if (!r.result) std::cerr << "cell " << r.variant.label << " failed: " << r.error << "\n";
  return 0;
}

AugmentKind ParseKind(const std::string& kind, double value, uint64_t seed, const RunConfig& cfg) {
  switch (ParseTag(kind)) {
    case AugmentTag::kPitch: return AugmentKind::Pitch(value);
    case AugmentTag::kAdd: return AugmentKind::AddNoise(value, 0, 0);
    case AugmentTag::kBandReject: return AugmentKind::BandReject(value, kMaxRejectWidthHz);
    case AugmentTag::kTimeMask: return AugmentKind::TimeMask(seed);
    case AugmentTag::kReverb: {
      Rng rng = StreamRng(seed, {0x5245});
      RoomSpec room = SampleRoom(rng, cfg.corpus.rir_max_order);
      room.absorption = value;
      return AugmentKind::Reverb(room);
    }
  }
  throw std::invalid_argument("--kind: unknown augmentation " + kind);
}

int CmdAugment(const Overrides& o, const std::string& in, const std::string& out,
               const std::string& kind, double value, uint64_t seed) {
  const RunConfig cfg = Resolve(o);
  RequireFile(in, "input wav");
  const Waveform w = ReadWav(in);
  const AugmentKind k = ParseKind(kind, value, seed, cfg);
  WriteWav(ApplyTransform(w, k, TrainingNoise(cfg)), out);
  std::cout << k.Describe() << "\n";
  return 0;
}

int CmdAttack(const Overrides& o, const std::string& checkpoint, const std::string& in,
              const std::string& transcript, const std::string& kind, double value,
              uint64_t seed) {
  const RunConfig cfg = Resolve(o);
  RequireFile(checkpoint, "checkpoint");
  RequireFile(in, "input wav");
  const ModelState state = LoadCheckpoint(checkpoint);
  const Frontend frontend(cfg.frontend);
  const Vocabulary vocab = ConfigVocabulary(cfg);
  const LabelSeq y = vocab.Label(transcript);
  const Waveform w = ReadWav(in);
  const NetworkModel model(state);
  const NoiseBank noise = TrainingNoise(cfg);
  Rng rng = StreamRng(seed, {0x4154});
  const Matrix z = frontend.Tokenize(w).frames;
  AttackResult a;
  if (cfg.train.mode == TrainMode::kWapat) {
    a = WapatStep(w, y, model, frontend, cfg.train.attack, ParseKind(kind, value, seed, cfg),
                  noise, rng);
  } else {
    a = PatStep(z, y.ids, model, cfg.train.attack, rng);
  }
  std::cout << Diagnose(z, a, y.ids, model).ToJsonLine() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toy CTC recognizer with representation-space adversarial training"};
  app.require_subcommand(1);
  Overrides o;

  auto* gen = app.add_subcommand("generate", "write the synthetic benchmark");
  AddCommon(gen, o);
  std::optional<uint64_t> corpus_seed;
  gen->add_option("--seed", corpus_seed, "corpus seed");

  auto* train = app.add_subcommand("train", "train a model");
  AddCommon(train, o);
  train->add_option("--mode", o.mode, "no_at | pat | wapat | waveform_at");
  train->add_option("--epsilon", o.epsilon, "l-inf radius");
  train->add_option("--seed", o.seed, "training seed");

  auto* eval = app.add_subcommand("evaluate", "score a checkpoint on every suite");
  AddCommon(eval, o);
  std::string checkpoint, baseline;
  eval->add_option("--checkpoint", checkpoint, "checkpoint (default: <out>/checkpoint.bin)");
  eval->add_option("--baseline", baseline, "baseline eval_result.json for drop rates");

  auto* report = app.add_subcommand("report", "drop-rate table from two results");
  std::string treated, report_out;
  report->add_option("--baseline", baseline, "baseline eval_result.json")->required();
  report->add_option("--treated", treated, "treated eval_result.json")->required();
  report->add_option("--out", report_out, "directory for drop_rate.csv");

  auto* ablate = app.add_subcommand("ablate", "mode and epsilon comparison grid");
  AddCommon(ablate, o);
  ablate->add_option("--seed", o.seed, "training seed");
  ablate->add_option("--epsilon", o.epsilon, "epsilon of the pat/wapat rows");
  std::vector<double> sweep;
  ablate->add_option("--sweep", sweep, "extra wapat epsilons");

  std::string in, out_wav, kind = "add", transcript;
  double value = 20.0;
  uint64_t aug_seed = 1;
  auto* augment = app.add_subcommand("augment", "apply one augmentation to a wav");
  AddCommon(augment, o);
  augment->add_option("--in", in, "input wav")->required();
  augment->add_option("--output", out_wav, "output wav")->required();
  augment->add_option("--kind", kind, "pitch | add | band_rej | time_mask | reverb");
  augment->add_option("--value", value, "cents, SNR dB, notch Hz or absorption");
  augment->add_option("--seed", aug_seed, "seed for time_mask and reverb");

  auto* attack = app.add_subcommand("attack", "one adversary with diagnostics");
  AddCommon(attack, o);
  attack->add_option("--checkpoint", checkpoint, "checkpoint")->required();
  attack->add_option("--in", in, "input wav")->required();
  attack->add_option("--transcript", transcript, "reference words")->required();
  attack->add_option("--mode", o.mode, "pat | wapat");
  attack->add_option("--epsilon", o.epsilon, "l-inf radius");
  attack->add_option("--kind", kind, "guidance augmentation");
  attack->add_option("--value", value, "augmentation parameter");
  attack->add_option("--seed", aug_seed, "attack seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return CmdGenerate(o, corpus_seed);
    if (*train) return CmdTrain(o);
    if (*eval) return CmdEvaluate(o, checkpoint, baseline);
    if (*report) return CmdReport(baseline, treated, report_out);
    if (*ablate) return CmdAblate(o, sweep);
    if (*augment) return CmdAugment(o, in, out_wav, kind, value, aug_seed);
    if (*attack) return CmdAttack(o, checkpoint, in, transcript, kind, value, aug_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
