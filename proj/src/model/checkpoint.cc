// src/model/checkpoint.cc

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

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "phonadv/optim.h"

namespace phonadv {
namespace {

constexpr char kMagic[8] = {'P', 'H', 'A', 'D', 'V', 'C', 'K', 'P'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  template <typename T>
  T Get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw CheckpointError("checkpoint: truncated file");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void GetVector(Vector& v, Eigen::Index n) {
    const std::size_t bytes = static_cast<std::size_t>(n) * sizeof(double);
    if (pos_ + bytes > bytes_.size()) throw CheckpointError("checkpoint: truncated file");
    v.resize(n);
    std::memcpy(v.data(), bytes_.data() + pos_, bytes);
    pos_ += bytes;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void SaveCheckpoint(const ModelState& state, const std::filesystem::path& path) {
  std::string out(kMagic, sizeof(kMagic));
  Put<uint32_t>(out, kVersion);
  Put<int32_t>(out, state.layout.input_dim);
  Put<int32_t>(out, state.layout.hidden);
  Put<int32_t>(out, state.layout.vocab);
  Put<uint64_t>(out, state.step_count);
  Put<uint64_t>(out, static_cast<uint64_t>(state.params.size()));
  for (const Vector* v : {&state.params, &state.adam_m, &state.adam_v})
    out.append(reinterpret_cast<const char*>(v->data()),
               static_cast<std::size_t>(v->size()) * sizeof(double));

  // Write-then-rename so a failed run never leaves a partial checkpoint.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError("cannot write checkpoint " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw CheckpointError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ModelState LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw CheckpointError(path.string() + ": not a checkpoint file");
  Reader r(bytes);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.Get<char>();
  const auto version = r.Get<uint32_t>();
  if (version != kVersion)
    throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                          std::to_string(version));
  ModelLayout layout;
  layout.input_dim = r.Get<int32_t>();
  layout.hidden = r.Get<int32_t>();
  layout.vocab = r.Get<int32_t>();
  ModelState state = ModelState::Zeros(layout);
  state.step_count = r.Get<uint64_t>();
  const auto n = static_cast<Eigen::Index>(r.Get<uint64_t>());
  if (n != layout.NumParams())
    throw CheckpointError(path.string() + ": parameter count does not match layout");
  r.GetVector(state.params, n);
  r.GetVector(state.adam_m, n);
  r.GetVector(state.adam_v, n);
  if (!r.AtEnd()) throw CheckpointError(path.string() + ": trailing bytes");
  return state;
}

}  // namespace phonadv
