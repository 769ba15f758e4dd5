// include/phonadv/trainer.h

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

#ifndef PHONADV_TRAINER_H_
#define PHONADV_TRAINER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonadv/adversary.h"
#include "phonadv/augment.h"
#include "phonadv/corpus.h"
#include "phonadv/frontend.h"
#include "phonadv/metrics.h"
#include "phonadv/optim.h"

namespace phonadv {

enum class TrainMode { kNoAt, kPat, kWapat, kWaveformAt };

std::string_view ModeName(TrainMode mode);
TrainMode ParseMode(std::string_view name);

struct TrainConfig {
  TrainMode mode = TrainMode::kNoAt;
  AttackConfig attack;
  ScheduleSpec schedule;      // schedule.total_steps is the run length
  double batch_seconds = 20.0;
  uint64_t seed = 1;
  int threads = 1;
  int hidden = 128;
  int waveform_pgd_steps = 5;  // PGD iterations of the waveform_at baseline
  int rir_max_order = 6;

  void Validate() const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepLog {
  int step = 0;
  double lr = 0.0;
  std::string mode;
  std::string transform;  // augmentation kind used for guidance, "none" otherwise
  double clean_loss = 0.0;
  double adv_loss = 0.0;
  double wag_term = 0.0;
  std::size_t batch_size = 0;

  std::string ToJsonLine() const;
};

struct TrainResult {
  ModelState state;
  std::vector<StepLog> log;
  std::size_t skipped = 0;  // CTC-infeasible utterances left out of training
};

/// Per-dimension mean and standard deviation of the frontend frames of `corpus`.
std::pair<Vector, Vector> FrameStatistics(const Corpus& corpus, const Frontend& frontend,
                                          int threads = 1);

/// Parameters every variant of an experiment starts from: a seeded
/// initialization whose first layer is standardized to the frame
/// statistics of `train` (skipped when `train` is empty).
ModelState InitialState(const TrainConfig& cfg, const Frontend& frontend, int vocab_size,
                        const Corpus& train);

/// Outer minimization: per step, a batch of up to batch_seconds of audio is
/// turned into training inputs according to the mode (clean, pat or wapat
/// adversaries, or waveform PGD), and Adam minimizes the batch-mean CTC
/// loss at lr_at(step). wapat draws one augmentation per batch. Results
/// depend only on (cfg, data, initial), never on cfg.threads.
TrainResult Train(const TrainConfig& cfg, const Corpus& train, const Frontend& frontend,
                  const NoiseBank& noise, ModelState initial);

struct AblationVariant {
  std::string label;
  TrainMode mode = TrainMode::kNoAt;
  double epsilon = 0.0;
};

struct AblationRow {
  AblationVariant variant;
  std::optional<EvalResult> result;
  std::string error;  // set when the cell failed
  double final_train_loss = 0.0;
};

/// Trains every variant from the same initial parameters and evaluates it
/// on the shared suites. A failing cell is recorded without stopping the rest.
std::vector<AblationRow> RunAblation(const TrainConfig& base,
                                     const std::vector<AblationVariant>& variants,
                                     const Corpus& train, const Frontend& frontend,
                                     const NoiseBank& noise,
                                     const std::vector<EvalSuite>& suites,
                                     const Vocabulary& vocab);

/// The mode/epsilon comparison grid as CSV.
std::string AblationTableCsv(const std::vector<AblationRow>& rows);

}  // namespace phonadv

#endif  // PHONADV_TRAINER_H_
