// tests/unit/metrics_test.cc

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

#include <algorithm>
#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "phonadv/metrics.h"
#include "test_util.h"

namespace phonadv {
namespace {

std::vector<std::string> W(const std::string& s) { return SplitWords(s); }

// Plain full-table edit distance used as the oracle.
std::size_t OracleDistance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return d[a.size()][b.size()];
}

std::vector<std::string> RandomWords(Rng& rng, int max_len) {
  std::vector<std::string> out(static_cast<std::size_t>(UniformInt(rng, 0, max_len)));
  for (auto& w : out) w = std::string(1, static_cast<char>('a' + UniformInt(rng, 0, 3)));
  return out;
}

TEST(WerTest, Examples) {
  EXPECT_EQ(Wer(W("a b c"), W("a b c")).edits, 0u);
  const WerCount one_sub = Wer(W("a b c"), W("a x c"));
  EXPECT_EQ(one_sub.edits, 1u);
  EXPECT_EQ(one_sub.ref_words, 3u);
  EXPECT_DOUBLE_EQ(one_sub.value(), 1.0 / 3.0);
  const WerCount shifted = Wer(W("the cat sat"), W("cat sat on"));
  EXPECT_EQ(shifted.edits, OracleDistance(W("the cat sat"), W("cat sat on")));
  EXPECT_DOUBLE_EQ(shifted.value(), 2.0 / 3.0);
  EXPECT_EQ(Wer(W("a b"), {}).edits, 2u);
  EXPECT_THROW(Wer({}, W("a")), std::invalid_argument);
}

TEST(WerTest, DistanceMatchesOracleAndNormalizationIsAsymmetric) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = RandomWords(rng, 8), b = RandomWords(rng, 8);
    EXPECT_EQ(EditDistance(a, b), OracleDistance(a, b));
    EXPECT_EQ(EditDistance(a, b), EditDistance(b, a));
    if (!a.empty() && !b.empty()) {
      EXPECT_NEAR(Wer(a, b).value() * a.size(), Wer(b, a).value() * b.size(), 1e-12);
    }
  }
}

TEST(WerTest, TriangleInequality) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = RandomWords(rng, 7), b = RandomWords(rng, 7), c = RandomWords(rng, 7);
    EXPECT_LE(EditDistance(a, c), EditDistance(a, b) + EditDistance(b, c));
  }
}

class EvaluateTest : public ::testing::Test {
 protected:
  EvaluateTest() : frontend_(FrontendSpec{}), vocab_(Vocabulary::Synthetic(4)) {
    layout_.input_dim = 32;
    layout_.hidden = 8;
    layout_.vocab = 4;
  }

  // Model whose argmax is symbol `id` on every frame.
  ModelState ConstantModel(int id) const {
    ModelState s = ModelState::Zeros(layout_);
    s.params(layout_.b3() + id) = 5.0;
    return s;
  }

  Utterance Utt(const std::string& words, std::size_t samples = 4000) const {
    Rng rng(samples + words.size());
    std::vector<double> s(samples);
    for (auto& v : s) v = Uniform(rng, -0.2, 0.2);
    return {Waveform(s, 16000), vocab_.Label(words)};
  }

  Frontend frontend_;
  Vocabulary vocab_;
  ModelLayout layout_;
};

TEST_F(EvaluateTest, PerfectTranscriptionScoresZero) {
  const Corpus corpus = {Utt("s2"), Utt("s2", 6000)};
  const EvalResult r = Evaluate(ConstantModel(2), frontend_, {{"a", &corpus, false}}, vocab_);
  EXPECT_EQ(r.WerOf("a"), 0.0);
  EXPECT_EQ(r.per_dataset.at("a").utterances, 2u);
}

TEST_F(EvaluateTest, CorpusLevelAggregationHandCase) {
  // Hypothesis is always "s1". Utterance 1: ref "s1" -> 0 edits of 1 word.
  // Utterance 2: ref "s0 s0 s0 s2" -> 4 edits of 4 words.
  // Corpus level: 4 / 5 = 0.8; the per-utterance mean would be 0.5.
  const Corpus corpus = {Utt("s1"), Utt("s0 s0 s0 s2")};
  const EvalResult r = Evaluate(ConstantModel(1), frontend_, {{"a", &corpus, false}}, vocab_);
  EXPECT_EQ(r.per_dataset.at("a").wer.edits, 4u);
  EXPECT_EQ(r.per_dataset.at("a").wer.ref_words, 5u);
  EXPECT_DOUBLE_EQ(r.WerOf("a"), 0.8);
}

TEST_F(EvaluateTest, MacroExcludesInDomainAndIgnoresOrder) {
  const Corpus clean = {Utt("s1")};
  const Corpus a = {Utt("s1"), Utt("s0 s0 s0 s2")};           // 0.8
  const Corpus b = {Utt("s0 s3")};                              // 1.0
  Corpus a_rev(a.rbegin(), a.rend());
  const ModelState m = ConstantModel(1);
  const EvalResult r = Evaluate(m, frontend_, {{"clean", &clean, true}, {"a", &a, false}, {"b", &b, false}}, vocab_, 2);
  EXPECT_EQ(r.in_domain_name, "clean");
  EXPECT_EQ(r.in_domain(), 0.0);
  EXPECT_EQ(r.out_of_domain, (std::vector<std::string>{"a", "b"}));
  EXPECT_NEAR(r.macro_score, 0.9, 1e-12);
  EXPECT_NEAR(r.macro_score, MacroScore(r), 1e-12);
  const EvalResult rev = Evaluate(m, frontend_, {{"a", &a_rev, false}}, vocab_);
  EXPECT_EQ(rev.WerOf("a"), r.WerOf("a"));
}

TEST_F(EvaluateTest, ShortUtteranceCountsAsFailure) {
  const Corpus corpus = {Utt("s1 s2", 100), Utt("s1")};
  const EvalResult r = Evaluate(ConstantModel(1), frontend_, {{"a", &corpus, false}}, vocab_);
  EXPECT_EQ(r.per_dataset.at("a").failures, 1u);
  EXPECT_DOUBLE_EQ(r.WerOf("a"), 2.0 / 3.0);
}

TEST_F(EvaluateTest, MatchesIndependentPipelineOnRandomModel) {
  Corpus corpus;
  Rng rng(3);
  for (int i = 0; i < 6; ++i) {
    std::string words;
    for (int k = 0; k < 3; ++k) words += (k ? " s" : "s") + std::to_string(UniformInt(rng, 0, 3));
    corpus.push_back(Utt(words, 3000 + 500 * i));
  }
  const ModelState m = ModelState::Initialize(layout_, 9);
  WerCount expected;
  for (const auto& u : corpus) {
    const auto ids = GreedyDecode(Forward(frontend_.Tokenize(u.audio).frames, m).logits);
    expected += Wer(SplitWords(u.label.words), SplitWords(vocab_.Render(ids)));
  }
  const EvalResult r1 = Evaluate(m, frontend_, {{"x", &corpus, false}}, vocab_, 1);
  const EvalResult r3 = Evaluate(m, frontend_, {{"x", &corpus, false}}, vocab_, 3);
  EXPECT_EQ(r1.per_dataset.at("x").wer.edits, expected.edits);
  EXPECT_EQ(r3.per_dataset.at("x").wer.edits, expected.edits);
}

EvalResult Fake(std::map<std::string, std::pair<std::size_t, std::size_t>> wers) {
  EvalResult r;
  for (const auto& [name, w] : wers) {
    r.per_dataset[name].wer = {w.first, w.second};
    r.order.push_back(name);
    r.out_of_domain.push_back(name);
  }
  r.macro_score = MacroScore(r);
  return r;
}

TEST(MacroTest, MeanOfMembers) {
  const EvalResult r = Fake({{"a", {1, 10}}, {"b", {3, 10}}});
  EXPECT_NEAR(r.macro_score, 0.20, 1e-12);
}

TEST(DropRateTest, Examples) {
  const EvalResult base = Fake({{"a", {4, 10}}, {"b", {0, 10}}});
  const EvalResult treated = Fake({{"a", {3, 10}}, {"b", {1, 10}}});
  const auto same = DropRate(base, base);
  EXPECT_EQ(*same.at("a"), 0.0);
  EXPECT_EQ(*same.at("macro"), 0.0);
  const auto d = DropRate(base, treated);
  EXPECT_NEAR(*d.at("a"), 25.0, 1e-12);
  EXPECT_FALSE(d.at("b").has_value());
  EXPECT_NEAR(*d.at("macro"), 0.0, 1e-12);
  EXPECT_THROW(DropRate(base, Fake({{"a", {1, 2}}})), std::invalid_argument);
}

TEST(DropRateTest, TwoDecimalFormat) {
  EXPECT_EQ(FormatFixed(100.0 * (36.47 - 32.58) / 36.47, 2), "10.67");
  EXPECT_EQ(FormatFixed(-0.001, 2), "0.00");
  EXPECT_EQ(FormatFixed(std::nan(""), 2), "n/a");
}

TEST(ReportTest, CsvLayouts) {
  const EvalResult base = Fake({{"a", {4, 10}}, {"b", {0, 10}}});
  const EvalResult treated = Fake({{"a", {3, 10}}, {"b", {1, 10}}});
  EXPECT_EQ(WerReportCsv(base), "dataset,wer_percent\na,40.00\nb,0.00\nmacro,20.00\n");
  EXPECT_EQ(DropRateCsv(base, treated), "dataset,drop_percent\na,25.00\nb,n/a\nmacro,0.00\n");
}

TEST(ReportTest, JsonRoundTrip) {
  EvalResult r = Fake({{"noisy", {7, 13}}, {"pitched", {2, 9}}});
  r.per_dataset["clean"].wer = {1, 11};
  r.per_dataset["clean"].failures = 1;
  r.per_dataset["clean"].utterances = 3;
  r.order.insert(r.order.begin(), "clean");
  r.in_domain_name = "clean";
  const EvalResult back = EvalResultFromJson(EvalResultToJson(r));
  EXPECT_EQ(back.order, r.order);
  EXPECT_EQ(back.out_of_domain, r.out_of_domain);
  EXPECT_EQ(back.in_domain_name, "clean");
  EXPECT_EQ(back.per_dataset.at("noisy").wer.edits, 7u);
  EXPECT_EQ(back.per_dataset.at("clean").failures, 1u);
  EXPECT_DOUBLE_EQ(back.macro_score, r.macro_score);
  const auto path = testing::ScratchDir("metrics") / "r.json";
  std::ofstream(path) << EvalResultToJson(r);
  EXPECT_EQ(LoadEvalResult(path).order, r.order);
  EXPECT_ANY_THROW(EvalResultFromJson("{\"bad\": 1"));
}

}  // namespace
}  // namespace phonadv
