// src/config/pipeline.cc

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

#include "phonadv/pipeline.h"

namespace phonadv {
namespace {

constexpr uint64_t kTrainTag = 1;
constexpr uint64_t kValTag = 2;
constexpr uint64_t kTestTag = 3;
constexpr uint64_t kDomainTag = 16;

Corpus Split(const RunConfig& cfg, const Frontend& frontend, uint64_t tag, int n,
             std::vector<ProfileEntry> profile) {
  CorpusSpec spec = cfg.corpus;
  spec.seed = SplitSeed(cfg.corpus.seed, tag);
  spec.n_utterances = n;
  spec.domain_profile = std::move(profile);
  return GenerateCorpus(spec, frontend);
}

}  // namespace

std::vector<EvalSuite> Benchmark::Suites() const {
  std::vector<EvalSuite> suites{{kCleanSuite, &test, true}};
  for (const auto& d : domains) suites.push_back({d.name, &d.corpus, false});
  return suites;
}

uint64_t SplitSeed(uint64_t corpus_seed, uint64_t tag) {
  return MixBits(corpus_seed ^ MixBits(tag));
}

Benchmark GenerateBenchmark(const RunConfig& cfg, const Frontend& frontend) {
  Benchmark b;
  b.train = Split(cfg, frontend, kTrainTag, cfg.splits.train, {});
  b.val = Split(cfg, frontend, kValTag, cfg.splits.val, {});
  b.test = Split(cfg, frontend, kTestTag, cfg.splits.test, {});
  const auto domains = DefaultDomains();
  for (std::size_t i = 0; i < domains.size(); ++i)
    b.domains.push_back({domains[i].name, Split(cfg, frontend, kDomainTag + i,
                                                cfg.splits.domain, domains[i].profile)});
  return b;
}

void WriteBenchmark(const Benchmark& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ExportCorpus(b.train, dir, "train");
  ExportCorpus(b.val, dir, "val");
  ExportCorpus(b.test, dir, "test");
  for (const auto& d : b.domains) ExportCorpus(d.corpus, dir, d.name);
}

Benchmark LoadBenchmark(const std::filesystem::path& dir, const Vocabulary& vocab) {
  Benchmark b;
  b.train = LoadCorpus(dir / "train.tsv", vocab);
  b.val = LoadCorpus(dir / "val.tsv", vocab);
  b.test = LoadCorpus(dir / "test.tsv", vocab);
  for (const auto& d : DefaultDomains())
    b.domains.push_back({d.name, LoadCorpus(dir / (d.name + ".tsv"), vocab)});
  return b;
}

NoiseBank TrainingNoise(const RunConfig& cfg) {
  if (!cfg.noise_manifest.empty()) return NoiseBank::FromManifest(cfg.noise_manifest);
  // Distinct from the bank the domains were generated with.
  return NoiseBank::Synthetic(SplitSeed(cfg.corpus.noise_seed, kTrainTag));
}

Vocabulary ConfigVocabulary(const RunConfig& cfg) {
  return Vocabulary::Synthetic(cfg.corpus.vocab_size);
}

}  // namespace phonadv
