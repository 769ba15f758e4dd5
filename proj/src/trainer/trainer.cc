// src/trainer/trainer.cc

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

#include "phonadv/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "phonadv/parallel.h"

namespace phonadv {
namespace {

// Stream keys for counter-based random streams.
constexpr uint64_t kShuffleStream = 0x5348;
constexpr uint64_t kTransformStream = 0x5452;
constexpr uint64_t kAttackStream = 0x4154;

struct ItemOutcome {
  Vector grad;
  double clean_loss = 0.0;
  double adv_loss = 0.0;
  double wag_term = 0.0;
};

class BatchSampler {
 public:
  BatchSampler(const Corpus& corpus, std::vector<std::size_t> usable, double batch_seconds,
               uint64_t seed)
      : corpus_(corpus), usable_(std::move(usable)), batch_seconds_(batch_seconds), seed_(seed) {
    Reshuffle();
  }

  std::vector<std::size_t> Next() {
    std::vector<std::size_t> batch;
    double seconds = 0.0;
    while (true) {
      if (cursor_ == order_.size()) {
        ++epoch_;
        Reshuffle();
        if (!batch.empty()) break;  // batches never span an epoch boundary
      }
      const std::size_t idx = order_[cursor_];
      const double dur = corpus_[idx].audio.duration_seconds();
      if (!batch.empty() && seconds + dur > batch_seconds_) break;
      batch.push_back(idx);
      seconds += dur;
      ++cursor_;
    }
    return batch;
  }

 private:
  void Reshuffle() {
    order_ = usable_;
    Rng rng = StreamRng(seed_, {kShuffleStream, epoch_});
    std::shuffle(order_.begin(), order_.end(), rng);
    cursor_ = 0;
  }

  const Corpus& corpus_;
  std::vector<std::size_t> usable_;
  std::vector<std::size_t> order_;
  double batch_seconds_;
  uint64_t seed_;
  uint64_t epoch_ = 0;
  std::size_t cursor_ = 0;
};

}  // namespace

std::string_view ModeName(TrainMode mode) {
  switch (mode) {
    case TrainMode::kNoAt: return "no_at";
    case TrainMode::kPat: return "pat";
    case TrainMode::kWapat: return "wapat";
    case TrainMode::kWaveformAt: return "waveform_at";
  }
  return "unknown";
}

TrainMode ParseMode(std::string_view name) {
  for (TrainMode m : {TrainMode::kNoAt, TrainMode::kPat, TrainMode::kWapat, TrainMode::kWaveformAt})
    if (ModeName(m) == name) return m;
  throw std::invalid_argument("unknown training mode '" + std::string(name) +
                              "' (expected no_at, pat, wapat or waveform_at)");
}

void TrainConfig::Validate() const {
  if (mode != TrainMode::kNoAt) attack.Validate();
  schedule.Validate();
  if (!(batch_seconds > 0.0)) throw std::invalid_argument("train.batch_seconds must be positive");
  if (threads < 1) throw std::invalid_argument("train.threads must be at least 1");
  if (hidden < 1) throw std::invalid_argument("model.hidden must be positive");
  if (waveform_pgd_steps < 1) throw std::invalid_argument("train.waveform_pgd_steps must be positive");
}

std::string StepLog::ToJsonLine() const {
  nlohmann::ordered_json j;
  j["step"] = step;
  j["lr"] = lr;
  j["mode"] = mode;
  j["transform"] = transform;
  j["clean_loss"] = clean_loss;
  j["adv_loss"] = adv_loss;
  j["wag_term"] = wag_term;
  j["batch_size"] = batch_size;
  return j.dump();
}

std::pair<Vector, Vector> FrameStatistics(const Corpus& corpus, const Frontend& frontend,
                                          int threads) {
  const int d = frontend.spec().d;
  std::vector<Vector> sums(corpus.size()), squares(corpus.size());
  std::vector<std::size_t> counts(corpus.size(), 0);
  ParallelFor(corpus.size(), threads, [&](std::size_t i) {
    if (frontend.NumFrames(corpus[i].audio.size()) == 0) return;
    const Matrix z = frontend.Tokenize(corpus[i].audio).frames;
    sums[i] = z.colwise().sum().transpose();
    squares[i] = z.array().square().colwise().sum().matrix().transpose();
    counts[i] = static_cast<std::size_t>(z.rows());
  });
  Vector sum = Vector::Zero(d), sq = Vector::Zero(d);
  std::size_t n = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!counts[i]) continue;
    sum += sums[i];
    sq += squares[i];
    n += counts[i];
  }
  if (n == 0) throw std::invalid_argument("frame statistics: no frames");
  const Vector mean = sum / static_cast<double>(n);
  Vector var = sq / static_cast<double>(n) - mean.cwiseAbs2();
  // Guard constant dimensions.
  const Vector stddev = var.cwiseMax(1e-12).cwiseSqrt();
  return {mean, stddev};
}

ModelState InitialState(const TrainConfig& cfg, const Frontend& frontend, int vocab_size,
                        const Corpus& train) {
  ModelLayout layout;
  layout.input_dim = frontend.spec().d;
  layout.hidden = cfg.hidden;
  layout.vocab = vocab_size;
  ModelState state = ModelState::Initialize(layout, cfg.seed);
  if (!train.empty()) {
    const auto [mean, stddev] = FrameStatistics(train, frontend, cfg.threads);
    StandardizeInputLayer(state, mean, stddev);
  }
  return state;
}

TrainResult Train(const TrainConfig& cfg, const Corpus& train, const Frontend& frontend,
                  const NoiseBank& noise, ModelState initial) {
  cfg.Validate();
  TrainResult result;
  result.state = std::move(initial);
  const int total = cfg.schedule.total_steps;
  if (total == 0) return result;
  if (train.empty()) throw TrainingError("train: empty corpus");
  if (cfg.mode == TrainMode::kWapat && noise.empty())
    throw TrainingError("train: wapat mode needs a nonempty noise bank");

  // Clean representations are fixed for the whole run: the frontend is frozen.
  std::vector<PhonemeRepr> clean(train.size());
  std::vector<char> feasible(train.size(), 0);
  ParallelFor(train.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t frames = frontend.NumFrames(train[i].audio.size());
    if (frames == 0 || static_cast<int>(frames) < CtcMinFrames(train[i].label.ids)) return;
    clean[i] = frontend.Tokenize(train[i].audio);
    feasible[i] = 1;
  });
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (feasible[i]) usable.push_back(i);
    else ++result.skipped;
  }
  if (usable.empty()) throw TrainingError("train: no CTC-feasible utterances");

  const TransformSamplerOptions sampler =
      SamplerOptionsFor(noise, frontend.sample_rate_hz(), cfg.rir_max_order);
  AttackConfig waveform_attack = cfg.attack;
  waveform_attack.steps = cfg.waveform_pgd_steps;
  if (cfg.mode == TrainMode::kWaveformAt && waveform_attack.steps > 1 &&
      waveform_attack.alpha >= waveform_attack.epsilon)
    waveform_attack.alpha = 2.5 * waveform_attack.epsilon / waveform_attack.steps;

  BatchSampler batches(train, std::move(usable), cfg.batch_seconds, cfg.seed);
  ModelState& state = result.state;
  result.log.reserve(static_cast<std::size_t>(total));

  for (int step = 0; step < total; ++step) {
    const std::vector<std::size_t> batch = batches.Next();
    std::optional<AugmentKind> transform;
    if (cfg.mode == TrainMode::kWapat) {
      Rng trng = StreamRng(cfg.seed, {kTransformStream, static_cast<uint64_t>(step)});
      transform = SampleTransform(trng, sampler);
    }

    const NetworkModel model(state);
    std::vector<ItemOutcome> outcomes(batch.size());
    ParallelFor(batch.size(), cfg.threads, [&](std::size_t b) {
      const std::size_t idx = batch[b];
      const Utterance& utt = train[idx];
      const Matrix& z = clean[idx].frames;
      const auto& ids = utt.label.ids;
      Rng rng = StreamRng(cfg.seed, {kAttackStream, static_cast<uint64_t>(step), b});
      ItemOutcome& out = outcomes[b];

      Matrix input;
      switch (cfg.mode) {
        case TrainMode::kNoAt:
          input = z;
          break;
        case TrainMode::kPat:
          input = PatStep(z, ids, model, cfg.attack, rng).adversary;
          break;
        case TrainMode::kWapat: {
          Matrix z_aug;
          try {
            z_aug = frontend.Tokenize(ApplyTransform(utt.audio, *transform, noise)).frames;
          } catch (const std::invalid_argument&) {
            z_aug = z;  // augmentation left nothing to tokenize (e.g. silence)
          }
          const AttackResult a = WapatStep(z, z_aug, ids, model, cfg.attack, rng);
          input = a.adversary;
          out.wag_term = a.wag_term;
          break;
        }
        case TrainMode::kWaveformAt: {
          const Waveform adv = PgdAttack(utt.audio, ids, model, frontend, waveform_attack, rng);
          input = frontend.Tokenize(adv).frames;
          break;
        }
      }

      const ForwardResult fwd = Forward(input, state);
      const CtcResult ctc = CtcForward(fwd.logits, ids);
      out.adv_loss = ctc.loss;
      out.grad = Backward(fwd.tape, state, ctc.grad).params;
      out.clean_loss = cfg.mode == TrainMode::kNoAt
                           ? ctc.loss
                           : CtcForward(Forward(z, state).logits, ids).loss;
    });

    // Ordered reduction keeps the sum independent of the thread count.
    Vector grad = Vector::Zero(state.params.size());
    StepLog entry;
    entry.step = step;
    entry.mode = std::string(ModeName(cfg.mode));
    entry.transform = transform ? std::string(TagName(transform->tag())) : "none";
    entry.batch_size = batch.size();
    for (const auto& o : outcomes) {
      grad += o.grad;
      entry.clean_loss += o.clean_loss;
      entry.adv_loss += o.adv_loss;
      entry.wag_term += o.wag_term;
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    grad *= inv;
    entry.clean_loss *= inv;
    entry.adv_loss *= inv;
    entry.wag_term *= inv;
    entry.lr = LrAt(cfg.schedule, step);

    if (!std::isfinite(entry.adv_loss) || !std::isfinite(entry.clean_loss)) {
      std::ostringstream os;
      os << "train: non-finite loss at step " << step << ": " << entry.ToJsonLine();
      throw TrainingError(os.str());
    }
    try {
      state = AdamStep(std::move(state), grad, entry.lr);
    } catch (const NonFiniteGradientError& e) {
      throw TrainingError(std::string(e.what()) + " at step " + std::to_string(step));
    }
    result.log.push_back(std::move(entry));
  }
  return result;
}

std::vector<AblationRow> RunAblation(const TrainConfig& base,
                                     const std::vector<AblationVariant>& variants,
                                     const Corpus& train, const Frontend& frontend,
                                     const NoiseBank& noise,
                                     const std::vector<EvalSuite>& suites,
                                     const Vocabulary& vocab) {
  if (variants.empty()) throw std::invalid_argument("ablation: no variants");
  const ModelState initial = InitialState(base, frontend, vocab.size(), train);
  std::vector<AblationRow> rows;
  for (const auto& v : variants) {
    AblationRow row;
    row.variant = v;
    try {
      TrainConfig cfg = base;
      cfg.mode = v.mode;
      cfg.attack.epsilon = v.epsilon;
      cfg.attack.alpha = std::min(cfg.attack.alpha, v.epsilon);
      cfg.attack.guidance = v.mode == TrainMode::kWapat;
      const TrainResult tr = Train(cfg, train, frontend, noise, initial);
      if (!tr.log.empty()) row.final_train_loss = tr.log.back().clean_loss;
      row.result = Evaluate(tr.state, frontend, suites, vocab, cfg.threads);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string AblationTableCsv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  std::vector<std::string> names;
  for (const auto& r : rows) {
    if (r.result) {
      names = r.result->order;
      break;
    }
  }
  os << "method,mode,epsilon";
  for (const auto& n : names) os << ',' << n;
  os << ",macro,status\n";
  for (const auto& r : rows) {
    os << r.variant.label << ',' << ModeName(r.variant.mode) << ','
       << FormatFixed(r.variant.epsilon, 4);
    for (const auto& n : names)
      os << ',' << (r.result ? FormatFixed(100.0 * r.result->WerOf(n), 2) : "n/a");
    os << ',' << (r.result ? FormatFixed(100.0 * r.result->macro_score, 2) : "n/a") << ','
       << (r.result ? "ok" : "failed") << '\n';
  }
  return os.str();
}

}  // namespace phonadv
