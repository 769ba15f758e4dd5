// src/config/config.cc

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

#include "phonadv/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace phonadv {
namespace {

using Json = nlohmann::json;

// Walks one JSON object, tracking the dotted path for error messages and
// rejecting keys the section does not declare.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Name() + ": expected an object");
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError(Field(key) + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError(Field(key) + ": expected an integer");
        if (std::is_unsigned_v<T> && it->is_number_integer() && !it->is_number_unsigned() &&
            it->template get<int64_t>() < 0)
          throw ConfigError(Field(key) + ": expected a nonnegative integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError(Field(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(Field(key) + ": expected a string");
      }
      out = it->template get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(Field(key) + ": " + e.what());
    }
  }

  void ReadPath(const std::string& key, std::filesystem::path& out) {
    std::string s = out.string();
    Read(key, s);
    out = s;
  }

  std::optional<Section> Child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return std::nullopt;
    return Section(*it, Field(key));
  }

  const Json* Raw(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void Finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(Field(key) + ": unknown key");
  }

  std::string Field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string Name() const { return path_.empty() ? "config" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void ReadFrontend(Section s, FrontendSpec& f) {
  s.Read("n_mels", f.n_mels);
  s.Read("window_ms", f.window_ms);
  s.Read("hop_ms", f.hop_ms);
  s.Read("d", f.d);
  s.Read("projection_seed", f.projection_seed);
  s.Finish();
}

void ReadSymbols(Section s, SymbolTemplateSpec& t) {
  s.Read("base_hz", t.base_hz);
  s.Read("semitone_step", t.semitone_step);
  s.Read("duration_ms", t.duration_ms);
  s.Read("ramp_ms", t.ramp_ms);
  s.Read("harmonics", t.harmonics);
  s.Read("jitter_cents", t.jitter_cents);
  s.Read("gain_lo", t.gain_lo);
  s.Read("gain_hi", t.gain_hi);
  s.Read("edge_silence_ms", t.edge_silence_ms);
  s.Read("noise_floor_snr_db", t.noise_floor_snr_db);
  s.Finish();
}

void ReadSplits(Section s, SplitSizes& sp) {
  s.Read("train", sp.train);
  s.Read("val", sp.val);
  s.Read("test", sp.test);
  s.Read("domain", sp.domain);
  s.Finish();
}

void ReadCorpus(Section s, CorpusSpec& c, SplitSizes& sp) {
  s.Read("vocab_size", c.vocab_size);
  s.Read("min_symbols", c.min_symbols);
  s.Read("max_symbols", c.max_symbols);
  s.Read("seed", c.seed);
  s.Read("noise_seed", c.noise_seed);
  s.Read("rir_max_order", c.rir_max_order);
  if (auto sub = s.Child("splits")) ReadSplits(*sub, sp);
  if (auto sub = s.Child("symbols")) ReadSymbols(*sub, c.symbols);
  s.Finish();
}

void ReadTrain(Section s, TrainConfig& t) {
  std::string mode(ModeName(t.mode));
  s.Read("mode", mode);
  try {
    t.mode = ParseMode(mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.Field("mode") + ": " + e.what());
  }
  s.Read("batch_seconds", t.batch_seconds);
  s.Read("seed", t.seed);
  s.Read("threads", t.threads);
  s.Read("waveform_pgd_steps", t.waveform_pgd_steps);
  s.Finish();
}

void ReadAttack(Section s, AttackConfig& a) {
  s.Read("epsilon", a.epsilon);
  s.Read("alpha", a.alpha);
  s.Read("steps", a.steps);
  s.Read("guidance_weight", a.guidance_weight);
  s.Finish();
}

void ReadSchedule(Section s, ScheduleSpec& sc) {
  s.Read("lr_max", sc.lr_max);
  s.Read("total_steps", sc.total_steps);
  if (const Json* p = s.Raw("phases")) {
    if (!p->is_array() || p->size() != 3)
      throw ConfigError(s.Field("phases") + ": expected an array of 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*p)[i].is_number()) throw ConfigError(s.Field("phases") + ": expected numbers");
      sc.phases[i] = (*p)[i].get<double>();
    }
  }
  s.Finish();
}

void ReadModel(Section s, TrainConfig& t) {
  s.Read("hidden", t.hidden);
  s.Finish();
}

void ReadPaths(Section s, RunConfig& r) {
  s.ReadPath("data_dir", r.data_dir);
  s.ReadPath("out_dir", r.out_dir);
  s.ReadPath("noise_manifest", r.noise_manifest);
  s.Finish();
}

// Re-throws a module's std::invalid_argument as a ConfigError.
template <typename Fn>
void Check(Fn fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void RunConfig::SyncMode() { train.attack.guidance = train.mode == TrainMode::kWapat; }

void RunConfig::Validate() const {
  Check([&] { frontend.Validate(); });
  Check([&] { corpus.Validate(); });
  Check([&] { train.Validate(); });
  Check([&] { train.attack.Validate(); });
  if (corpus.symbols.duration_ms < frontend.window_ms)
    throw ConfigError("corpus.symbols.duration_ms: shorter than frontend.window_ms");
  if (splits.train < 1) throw ConfigError("corpus.splits.train must be positive");
  if (splits.val < 0 || splits.test < 1 || splits.domain < 1)
    throw ConfigError("corpus.splits: val must be >= 0, test and domain positive");
  if (corpus.rir_max_order < 0) throw ConfigError("corpus.rir_max_order must be nonnegative");
}

RunConfig ParseRunConfig(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  RunConfig r;
  Section root(j, "");
  if (auto s = root.Child("frontend")) ReadFrontend(*s, r.frontend);
  if (auto s = root.Child("corpus")) ReadCorpus(*s, r.corpus, r.splits);
  if (auto s = root.Child("model")) ReadModel(*s, r.train);
  if (auto s = root.Child("train")) ReadTrain(*s, r.train);
  if (auto s = root.Child("attack")) ReadAttack(*s, r.train.attack);
  if (auto s = root.Child("schedule")) ReadSchedule(*s, r.train.schedule);
  if (auto s = root.Child("paths")) ReadPaths(*s, r);
  root.Finish();
  r.train.rir_max_order = r.corpus.rir_max_order;
  r.SyncMode();
  r.Validate();
  return r;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

std::string RunConfigToJson(const RunConfig& r) {
  nlohmann::ordered_json j;
  const auto& f = r.frontend;
  j["frontend"] = {{"n_mels", f.n_mels}, {"window_ms", f.window_ms}, {"hop_ms", f.hop_ms},
                   {"d", f.d}, {"projection_seed", f.projection_seed}};
  const auto& c = r.corpus;
  const auto& t = c.symbols;
  nlohmann::ordered_json corpus;
  corpus["vocab_size"] = c.vocab_size;
  corpus["min_symbols"] = c.min_symbols;
  corpus["max_symbols"] = c.max_symbols;
  corpus["seed"] = c.seed;
  corpus["noise_seed"] = c.noise_seed;
  corpus["rir_max_order"] = c.rir_max_order;
  corpus["splits"] = {{"train", r.splits.train}, {"val", r.splits.val},
                      {"test", r.splits.test}, {"domain", r.splits.domain}};
  corpus["symbols"] = {{"base_hz", t.base_hz}, {"semitone_step", t.semitone_step},
                       {"duration_ms", t.duration_ms}, {"ramp_ms", t.ramp_ms},
                       {"harmonics", t.harmonics}, {"jitter_cents", t.jitter_cents},
                       {"gain_lo", t.gain_lo}, {"gain_hi", t.gain_hi},
                       {"edge_silence_ms", t.edge_silence_ms},
                       {"noise_floor_snr_db", t.noise_floor_snr_db}};
  j["corpus"] = corpus;
  j["model"] = {{"hidden", r.train.hidden}};
  j["train"] = {{"mode", std::string(ModeName(r.train.mode))},
                {"batch_seconds", r.train.batch_seconds},
                {"seed", r.train.seed},
                {"threads", r.train.threads},
                {"waveform_pgd_steps", r.train.waveform_pgd_steps}};
  const auto& a = r.train.attack;
  j["attack"] = {{"epsilon", a.epsilon}, {"alpha", a.alpha}, {"steps", a.steps},
                 {"guidance_weight", a.guidance_weight}};
  const auto& s = r.train.schedule;
  j["schedule"] = {{"lr_max", s.lr_max},
                   {"phases", {s.phases[0], s.phases[1], s.phases[2]}},
                   {"total_steps", s.total_steps}};
  j["paths"] = {{"data_dir", r.data_dir.string()}, {"out_dir", r.out_dir.string()},
                {"noise_manifest", r.noise_manifest.string()}};
  return j.dump(2) + "\n";
}

}  // namespace phonadv
