// tests/unit/config_test.cc

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

#include <fstream>

#include <gtest/gtest.h>

#include "phonadv/config.h"
#include "phonadv/pipeline.h"
#include "test_util.h"

namespace phonadv {
namespace {

std::string ErrorOf(const std::string& json) {
  try {
    ParseRunConfig(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool Mentions(const std::string& json, const std::string& field) {
  return ErrorOf(json).find(field) != std::string::npos;
}

TEST(ConfigTest, EmptyObjectGivesDefaults) {
  const RunConfig r = ParseRunConfig("{}");
  EXPECT_EQ(r.frontend, FrontendSpec{});
  EXPECT_EQ(r.corpus.vocab_size, 10);
  EXPECT_EQ(r.splits.train, 400);
  EXPECT_EQ(r.train.mode, TrainMode::kNoAt);
  EXPECT_FALSE(r.train.attack.guidance);
  EXPECT_EQ(r.data_dir, "data");
}

TEST(ConfigTest, ReadsNestedFields) {
  const RunConfig r = ParseRunConfig(R"({
    "frontend": {"d": 16, "n_mels": 40},
    "corpus": {"vocab_size": 6, "rir_max_order": 3, "splits": {"train": 20},
               "symbols": {"gain_lo": 0.5, "gain_hi": 0.5}},
    "model": {"hidden": 64},
    "train": {"mode": "wapat", "batch_seconds": 4, "seed": 9, "threads": 2},
    "attack": {"epsilon": 0.02, "alpha": 0.02, "guidance_weight": 2},
    "schedule": {"lr_max": 0.001, "phases": [0.2, 0.3, 0.5], "total_steps": 50},
    "paths": {"data_dir": "d", "out_dir": "o"}})");
  EXPECT_EQ(r.frontend.d, 16);
  EXPECT_EQ(r.frontend.n_mels, 40);
  EXPECT_EQ(r.corpus.vocab_size, 6);
  EXPECT_EQ(r.train.rir_max_order, 3);
  EXPECT_EQ(r.splits.train, 20);
  EXPECT_EQ(r.corpus.symbols.gain_lo, 0.5);
  EXPECT_EQ(r.train.hidden, 64);
  EXPECT_EQ(r.train.mode, TrainMode::kWapat);
  EXPECT_TRUE(r.train.attack.guidance);
  EXPECT_EQ(r.train.batch_seconds, 4.0);
  EXPECT_EQ(r.train.seed, 9u);
  EXPECT_EQ(r.train.attack.guidance_weight, 2.0);
  EXPECT_EQ(r.train.schedule.phases[0], 0.2);
  EXPECT_EQ(r.train.schedule.total_steps, 50);
  EXPECT_EQ(r.out_dir, "o");
}

TEST(ConfigTest, UnknownKeysAreRejectedByName) {
  EXPECT_TRUE(Mentions(R"({"atack": {}})", "atack: unknown key"));
  EXPECT_TRUE(Mentions(R"({"attack": {"epsilom": 0.1}})", "attack.epsilom: unknown key"));
  EXPECT_TRUE(Mentions(R"({"corpus": {"symbols": {"pitch": 1}}})", "corpus.symbols.pitch: unknown key"));
}

TEST(ConfigTest, TypeAndRangeErrorsNameTheField) {
  EXPECT_TRUE(Mentions(R"({"attack": {"epsilon": "big"}})", "attack.epsilon"));
  EXPECT_TRUE(Mentions(R"({"attack": {"epsilon": -0.1}})", "epsilon"));
  EXPECT_TRUE(Mentions(R"({"corpus": {"vocab_size": 0}})", "corpus.vocab_size"));
  EXPECT_TRUE(Mentions(R"({"corpus": {"splits": {"train": 0}}})", "corpus.splits.train"));
  EXPECT_TRUE(Mentions(R"({"train": {"mode": "fgsm"}})", "train.mode"));
  EXPECT_TRUE(Mentions(R"({"train": {"batch_seconds": 0}})", "batch_seconds"));
  EXPECT_TRUE(Mentions(R"({"train": {"threads": 1.5}})", "train.threads"));
  EXPECT_TRUE(Mentions(R"({"schedule": {"phases": [0.5, 0.5, 0.5]}})", "schedule.phases"));
  EXPECT_TRUE(Mentions(R"({"schedule": {"phases": [1.0]}})", "schedule.phases"));
  EXPECT_TRUE(Mentions(R"({"frontend": {"d": 0}})", "frontend"));
  EXPECT_TRUE(Mentions(R"({"corpus": {"symbols": {"gain_lo": 0}}})", "corpus.symbols.gain_lo"));
  EXPECT_TRUE(Mentions(R"({"corpus": {"symbols": {"duration_ms": 10, "ramp_ms": 2}}})", "duration_ms"));
  EXPECT_TRUE(Mentions("[1, 2]", "expected an object"));
  EXPECT_TRUE(Mentions("{", "malformed"));
}

TEST(ConfigTest, NoAtIgnoresInvalidAttackOnlyWhenUnused) {
  EXPECT_FALSE(ErrorOf(R"({"train": {"mode": "pat"}, "attack": {"epsilon": 0.0, "alpha": 0.0}})").size());
  EXPECT_TRUE(Mentions(R"({"train": {"mode": "pat"}, "attack": {"steps": 0}})", "attack"));
}

TEST(ConfigTest, CanonicalJsonRoundTrips) {
  const RunConfig a = ParseRunConfig(R"({"train": {"mode": "pat", "seed": 4}, "attack": {"epsilon": 0.03, "alpha": 0.03},
                                        "corpus": {"symbols": {"noise_floor_snr_db": 30}}})");
  const std::string text = RunConfigToJson(a);
  const RunConfig b = ParseRunConfig(text);
  EXPECT_EQ(RunConfigToJson(b), text);
  EXPECT_EQ(b.train.mode, TrainMode::kPat);
  EXPECT_EQ(b.train.attack.epsilon, 0.03);
  EXPECT_EQ(b.corpus.symbols.noise_floor_snr_db, 30.0);
}

TEST(ConfigTest, LoadFromFile) {
  const auto dir = testing::ScratchDir("config");
  std::ofstream(dir / "c.json") << R"({"model": {"hidden": 8}})";
  EXPECT_EQ(LoadRunConfig(dir / "c.json").train.hidden, 8);
  EXPECT_THROW(LoadRunConfig(dir / "absent.json"), ConfigError);
}

TEST(PipelineTest, SplitSeedsAreDistinct) {
  EXPECT_NE(SplitSeed(1, 1), SplitSeed(1, 2));
  EXPECT_NE(SplitSeed(1, 1), SplitSeed(2, 1));
  EXPECT_EQ(SplitSeed(5, 3), SplitSeed(5, 3));
}

TEST(PipelineTest, BenchmarkWriteLoadRoundTrip) {
  RunConfig cfg = ParseRunConfig(R"({"corpus": {"splits": {"train": 3, "val": 1, "test": 2, "domain": 2}}})");
  const Frontend frontend(cfg.frontend);
  const Benchmark b = GenerateBenchmark(cfg, frontend);
  EXPECT_EQ(b.train.size(), 3u);
  EXPECT_EQ(b.val.size(), 1u);
  EXPECT_EQ(b.test.size(), 2u);
  ASSERT_EQ(b.domains.size(), 5u);
  const auto suites = b.Suites();
  ASSERT_EQ(suites.size(), 6u);
  EXPECT_EQ(suites[0].name, kCleanSuite);
  EXPECT_TRUE(suites[0].in_domain);
  EXPECT_FALSE(suites[1].in_domain);
  // Train and test come from different seeds.
  EXPECT_NE(b.train[0].audio.samples(), b.test[0].audio.samples());

  const auto dir = testing::ScratchDir("bench");
  WriteBenchmark(b, dir);
  for (const char* name : {"train", "val", "test", "noisy", "reverberant", "pitched", "notched", "combined"})
    EXPECT_TRUE(std::filesystem::exists(dir / (std::string(name) + ".tsv"))) << name;
  const Benchmark back = LoadBenchmark(dir, ConfigVocabulary(cfg));
  EXPECT_EQ(back.train.size(), 3u);
  EXPECT_EQ(back.domains[4].corpus[1].label.ids, b.domains[4].corpus[1].label.ids);
  EXPECT_THROW(LoadBenchmark(dir / "missing", ConfigVocabulary(cfg)), std::runtime_error);
}

TEST(PipelineTest, TrainingNoiseFromManifestOrSynthetic) {
  RunConfig cfg;
  EXPECT_EQ(TrainingNoise(cfg).size(), 3u);
  const auto dir = testing::ScratchDir("noise");
  WriteWav(testing::Tone(200.0, 4000), dir / "hum.wav");
  std::ofstream(dir / "noise.tsv") << "hum.wav\thum\n";
  cfg.noise_manifest = dir / "noise.tsv";
  const NoiseBank bank = TrainingNoise(cfg);
  ASSERT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank.at(0).tag, "hum");
}

}  // namespace
}  // namespace phonadv
