// include/phonadv/metrics.h

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

#ifndef PHONADV_METRICS_H_
#define PHONADV_METRICS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phonadv/corpus.h"
#include "phonadv/frontend.h"
#include "phonadv/model.h"

namespace phonadv {

/// Word errors as an exact ratio: edits / reference words.
struct WerCount {
  std::size_t edits = 0;
  std::size_t ref_words = 0;

  double value() const { return static_cast<double>(edits) / static_cast<double>(ref_words); }
  WerCount& operator+=(const WerCount& o) {
    edits += o.edits;
    ref_words += o.ref_words;
    return *this;
  }
};

/// Levenshtein distance with unit substitution/insertion/deletion costs.
std::size_t EditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b);

/// Throws std::invalid_argument on an empty reference.
WerCount Wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

struct EvalSuite {
  std::string name;
  const Corpus* corpus = nullptr;
  bool in_domain = false;
};

struct SuiteResult {
  WerCount wer;            // corpus level: summed edits / summed reference words
  std::size_t utterances = 0;
  std::size_t failures = 0;  // utterances that could not be decoded
};

struct EvalResult {
  std::map<std::string, SuiteResult> per_dataset;
  std::vector<std::string> order;           // suite names in report order
  std::vector<std::string> out_of_domain;   // members of the macro average
  std::string in_domain_name;               // empty when no in-domain suite
  double macro_score = 0.0;                 // mean out-of-domain WER

  double in_domain() const { return per_dataset.at(in_domain_name).wer.value(); }
  double WerOf(const std::string& name) const { return per_dataset.at(name).wer.value(); }
};

/// Mean of the out-of-domain suites' corpus-level WERs.
double MacroScore(const EvalResult& r);

/// tokenize -> forward -> greedy decode -> render -> WER, per suite. The
/// in-domain suite is reported but excluded from the macro score.
EvalResult Evaluate(const ModelState& state, const Frontend& frontend,
                    const std::vector<EvalSuite>& suites, const Vocabulary& vocab,
                    int threads = 1);

/// 100 * (baseline - treated) / baseline per dataset plus "macro"; nullopt
/// when the baseline WER is zero.
std::map<std::string, std::optional<double>> DropRate(const EvalResult& baseline,
                                                      const EvalResult& treated);

/// "dataset,wer_percent" rows in report order followed by a "macro" row.
std::string WerReportCsv(const EvalResult& r);
/// "dataset,drop_percent" rows (2 decimals, "n/a" when undefined).
std::string DropRateCsv(const EvalResult& baseline, const EvalResult& treated);

std::string EvalResultToJson(const EvalResult& r);
EvalResult EvalResultFromJson(const std::string& text);
EvalResult LoadEvalResult(const std::filesystem::path& path);

std::string FormatFixed(double v, int decimals);

}  // namespace phonadv

#endif  // PHONADV_METRICS_H_
