// src/datagen/corpus.cc

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

#include "phonadv/corpus.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace phonadv {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) throw std::invalid_argument("vocabulary must not be empty");
}

Vocabulary Vocabulary::Synthetic(int v) {
  if (v <= 0) throw std::invalid_argument("vocab_size must be positive");
  std::vector<std::string> words;
  for (int i = 0; i < v; ++i) words.push_back("s" + std::to_string(i));
  return Vocabulary(std::move(words));
}

int Vocabulary::Id(const std::string& word) const {
  const auto it = std::find(words_.begin(), words_.end(), word);
  if (it == words_.end()) throw std::invalid_argument("word '" + word + "' not in vocabulary");
  return static_cast<int>(it - words_.begin());
}

std::string Vocabulary::Render(const std::vector<int>& ids) const {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += Word(ids[i]);
  }
  return out;
}

LabelSeq Vocabulary::Label(const std::string& transcript) const {
  LabelSeq y;
  for (const auto& w : SplitWords(transcript)) y.ids.push_back(Id(w));
  y.words = Render(y.ids);
  return y;
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace phonadv
