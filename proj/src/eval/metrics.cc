// src/eval/metrics.cc

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

#include "phonadv/metrics.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "phonadv/ctc.h"
#include "phonadv/parallel.h"

namespace phonadv {

std::size_t EditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

WerCount Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw std::invalid_argument("wer: empty reference");
  return {EditDistance(ref, hyp), ref.size()};
}

double MacroScore(const EvalResult& r) {
  if (r.out_of_domain.empty()) return std::nan("");
  double sum = 0.0;
  for (const auto& name : r.out_of_domain) sum += r.WerOf(name);
  return sum / static_cast<double>(r.out_of_domain.size());
}

EvalResult Evaluate(const ModelState& state, const Frontend& frontend,
                    const std::vector<EvalSuite>& suites, const Vocabulary& vocab,
                    int threads) {
  if (suites.empty()) throw std::invalid_argument("evaluate: no suites");
  EvalResult result;
  for (const auto& suite : suites) {
    if (suite.corpus == nullptr) throw std::invalid_argument("evaluate: null corpus");
    const Corpus& corpus = *suite.corpus;
    struct Item {
      WerCount wer;
      bool failed = false;
    };
    std::vector<Item> items(corpus.size());
    ParallelFor(corpus.size(), threads, [&](std::size_t i) {
      const auto ref = SplitWords(corpus[i].label.words);
      try {
        const PhonemeRepr z = frontend.Tokenize(corpus[i].audio);
        const ForwardResult fwd = Forward(z.frames, state);
        const auto hyp = SplitWords(vocab.Render(GreedyDecode(fwd.logits)));
        items[i].wer = Wer(ref, hyp);
      } catch (const std::invalid_argument&) {
        // Undecodable input (e.g. shorter than a window): every word missed.
        items[i].failed = true;
        items[i].wer = {ref.size(), ref.size()};
      }
    });
    SuiteResult sr;
    sr.utterances = corpus.size();
    for (const auto& it : items) {
      sr.wer += it.wer;
      if (it.failed) ++sr.failures;
    }
    if (sr.wer.ref_words == 0)
      throw std::invalid_argument("evaluate: suite '" + suite.name + "' has no reference words");
    result.per_dataset[suite.name] = sr;
    result.order.push_back(suite.name);
    if (suite.in_domain) {
      if (!result.in_domain_name.empty())
        throw std::invalid_argument("evaluate: more than one in-domain suite");
      result.in_domain_name = suite.name;
    } else {
      result.out_of_domain.push_back(suite.name);
    }
  }
  result.macro_score = MacroScore(result);
  return result;
}

std::map<std::string, std::optional<double>> DropRate(const EvalResult& baseline,
                                                      const EvalResult& treated) {
  auto drop = [](double base, double t) -> std::optional<double> {
    if (!(base > 0.0) || !std::isfinite(base)) return std::nullopt;
    return 100.0 * (base - t) / base;
  };
  std::map<std::string, std::optional<double>> out;
  for (const auto& [name, sr] : baseline.per_dataset) {
    const auto it = treated.per_dataset.find(name);
    if (it == treated.per_dataset.end())
      throw std::invalid_argument("drop_rate: suite '" + name + "' missing from treated result");
    out[name] = drop(sr.wer.value(), it->second.wer.value());
  }
  if (treated.per_dataset.size() != baseline.per_dataset.size())
    throw std::invalid_argument("drop_rate: suite sets differ");
  out["macro"] = drop(baseline.macro_score, treated.macro_score);
  return out;
}

std::string FormatFixed(double v, int decimals) {
  if (!std::isfinite(v)) return "n/a";
  const double scale = std::pow(10.0, decimals);
  double rounded = std::round(v * scale) / scale;
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded);
  return buf;
}

std::string WerReportCsv(const EvalResult& r) {
  std::ostringstream os;
  os << "dataset,wer_percent\n";
  for (const auto& name : r.order) os << name << ',' << FormatFixed(100.0 * r.WerOf(name), 2) << '\n';
  os << "macro," << FormatFixed(100.0 * r.macro_score, 2) << '\n';
  return os.str();
}

std::string DropRateCsv(const EvalResult& baseline, const EvalResult& treated) {
  const auto drops = DropRate(baseline, treated);
  std::ostringstream os;
  os << "dataset,drop_percent\n";
  auto emit = [&](const std::string& name) {
    const auto& v = drops.at(name);
    os << name << ',' << (v ? FormatFixed(*v, 2) : std::string("n/a")) << '\n';
  };
  for (const auto& name : baseline.order) emit(name);
  emit("macro");
  return os.str();
}

std::string EvalResultToJson(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["in_domain"] = r.in_domain_name;
  j["out_of_domain"] = r.out_of_domain;
  j["order"] = r.order;
  nlohmann::ordered_json suites = nlohmann::ordered_json::object();
  for (const auto& name : r.order) {
    const auto& sr = r.per_dataset.at(name);
    suites[name] = {{"edits", sr.wer.edits},
                    {"ref_words", sr.wer.ref_words},
                    {"utterances", sr.utterances},
                    {"failures", sr.failures},
                    {"wer", sr.wer.value()}};
  }
  j["suites"] = suites;
  j["macro_score"] = r.macro_score;
  return j.dump(2) + "\n";
}

EvalResult EvalResultFromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvalResult r;
  r.in_domain_name = j.at("in_domain").get<std::string>();
  r.out_of_domain = j.at("out_of_domain").get<std::vector<std::string>>();
  r.order = j.at("order").get<std::vector<std::string>>();
  for (const auto& name : r.order) {
    const auto& s = j.at("suites").at(name);
    SuiteResult sr;
    sr.wer.edits = s.at("edits").get<std::size_t>();
    sr.wer.ref_words = s.at("ref_words").get<std::size_t>();
    sr.utterances = s.at("utterances").get<std::size_t>();
    sr.failures = s.at("failures").get<std::size_t>();
    r.per_dataset[name] = sr;
  }
  r.macro_score = MacroScore(r);
  return r;
}

EvalResult LoadEvalResult(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open evaluation result " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return EvalResultFromJson(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": malformed evaluation result: " + e.what());
  }
}

}  // namespace phonadv
