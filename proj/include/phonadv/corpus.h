// include/phonadv/corpus.h

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

#ifndef PHONADV_CORPUS_H_
#define PHONADV_CORPUS_H_

#include <string>
#include <vector>

#include "phonadv/ctc.h"
#include "phonadv/waveform.h"

namespace phonadv {

struct Utterance {
  Waveform audio;
  LabelSeq label;
};

using Corpus = std::vector<Utterance>;

/// Symbol inventory: symbol id i is rendered as words[i].
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> words);
  /// Default names "s0", "s1", ... for a synthetic inventory of size v.
  static Vocabulary Synthetic(int v);

  int size() const { return static_cast<int>(words_.size()); }
  const std::string& Word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  /// Throws std::invalid_argument naming the first unknown word.
  int Id(const std::string& word) const;

  std::string Render(const std::vector<int>& ids) const;
  LabelSeq Label(const std::string& transcript) const;

 private:
  std::vector<std::string> words_;
};

std::vector<std::string> SplitWords(const std::string& text);

}  // namespace phonadv

#endif  // PHONADV_CORPUS_H_
