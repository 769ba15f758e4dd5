// include/phonadv/pipeline.h

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

#ifndef PHONADV_PIPELINE_H_
#define PHONADV_PIPELINE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "phonadv/config.h"
#include "phonadv/metrics.h"

namespace phonadv {

inline constexpr char kCleanSuite[] = "clean";

struct NamedCorpus {
  std::string name;
  Corpus corpus;
};

/// Clean train/val/test splits plus the held-out domains.
struct Benchmark {
  Corpus train;
  Corpus val;
  Corpus test;
  std::vector<NamedCorpus> domains;

  /// The clean test split (in-domain) followed by every domain.
  std::vector<EvalSuite> Suites() const;
};

/// Seed of split `tag` derived from the corpus seed.
uint64_t SplitSeed(uint64_t corpus_seed, uint64_t tag);

Benchmark GenerateBenchmark(const RunConfig& cfg, const Frontend& frontend);

/// train.tsv, val.tsv, test.tsv and <domain>.tsv with their WAV folders.
void WriteBenchmark(const Benchmark& b, const std::filesystem::path& dir);
Benchmark LoadBenchmark(const std::filesystem::path& dir, const Vocabulary& vocab);

NoiseBank TrainingNoise(const RunConfig& cfg);
Vocabulary ConfigVocabulary(const RunConfig& cfg);

}  // namespace phonadv

#endif  // PHONADV_PIPELINE_H_
