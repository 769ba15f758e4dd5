// include/phonadv/model.h

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

#ifndef PHONADV_MODEL_H_
#define PHONADV_MODEL_H_

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "phonadv/types.h"

namespace phonadv {

class StaleTapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape of the acoustic model: affine d->h, tanh, depthwise temporal
/// convolution (kernel 5, same padding), affine h->h, tanh, affine h->V+1.
struct ModelLayout {
  static constexpr int kKernel = 5;
  int input_dim = 32;
  int hidden = 128;
  int vocab = 10;  // V; logits have V + 1 columns, blank last

  int num_symbols() const { return vocab + 1; }
  Eigen::Index NumParams() const;
  bool operator==(const ModelLayout&) const = default;

  // Offsets of each block inside the flat parameter vector.
  Eigen::Index w1() const { return 0; }
  Eigen::Index b1() const { return w1() + static_cast<Eigen::Index>(hidden) * input_dim; }
  Eigen::Index conv() const { return b1() + hidden; }
  Eigen::Index conv_bias() const { return conv() + static_cast<Eigen::Index>(hidden) * kKernel; }
  Eigen::Index w2() const { return conv_bias() + hidden; }
  Eigen::Index b2() const { return w2() + static_cast<Eigen::Index>(hidden) * hidden; }
  Eigen::Index w3() const { return b2() + hidden; }
  Eigen::Index b3() const { return w3() + static_cast<Eigen::Index>(num_symbols()) * hidden; }
};

/// Trainable parameters with Adam moments. `step_count` counts applied
/// updates and doubles as the parameter version checked by Backward.
struct ModelState {
  ModelLayout layout;
  Vector params;
  Vector adam_m;
  Vector adam_v;
  uint64_t step_count = 0;

  static ModelState Zeros(const ModelLayout& layout);
  /// Scaled-Gaussian initialization, deterministic in `seed`.
  static ModelState Initialize(const ModelLayout& layout, uint64_t seed);
};

/// Activations kept by Forward for the reverse pass.
struct Tape {
  ModelLayout layout;
  uint64_t step_count = 0;
  const double* params = nullptr;
  Matrix input;
  Matrix h1;
  Matrix mixed;
  Matrix h2;
};

struct ForwardResult {
  Matrix logits;
  Tape tape;
};

struct Gradients {
  Vector params;  // empty when parameter gradients were not requested
  Matrix input;
};

/// Rescales the first affine layer so that it sees (z - mean) / stddev:
/// afterwards Forward(z) equals the previous Forward((z - mean) / stddev).
void StandardizeInputLayer(ModelState& state, const Vector& mean, const Vector& stddev);

ForwardResult Forward(const Matrix& z, const ModelState& state);

/// Exact reverse-mode gradients of sum(grad_logits .* logits). Throws
/// StaleTapeError if `state` changed since the tape was recorded.
Gradients Backward(const Tape& tape, const ModelState& state,
                   const Matrix& grad_logits, bool want_param_grads = true);

/// A differentiable map from frame representations to logits. Attacks only
/// need logits and the input vector-Jacobian product.
class LogitsModel {
 public:
  struct Linearization {
    Matrix logits;
    std::function<Matrix(const Matrix&)> input_vjp;
  };

  virtual ~LogitsModel() = default;
  virtual int input_dim() const = 0;
  virtual int num_symbols() const = 0;
  virtual Linearization Linearize(const Matrix& z) const = 0;
  virtual Matrix Logits(const Matrix& z) const { return Linearize(z).logits; }
};

/// LogitsModel view of a ModelState; the state must outlive the view.
class NetworkModel : public LogitsModel {
 public:
  explicit NetworkModel(const ModelState& state) : state_(state) {}
  int input_dim() const override { return state_.layout.input_dim; }
  int num_symbols() const override { return state_.layout.num_symbols(); }
  Linearization Linearize(const Matrix& z) const override;
  Matrix Logits(const Matrix& z) const override;

 private:
  const ModelState& state_;
};

/// Per-frame affine map logits = z W^T + b with no temporal context.
class AffineFrameModel : public LogitsModel {
 public:
  AffineFrameModel(Matrix weight, Vector bias);
  int input_dim() const override { return static_cast<int>(weight_.cols()); }
  int num_symbols() const override { return static_cast<int>(weight_.rows()); }
  Linearization Linearize(const Matrix& z) const override;
  const Matrix& weight() const { return weight_; }

 private:
  Matrix weight_;  // (V + 1) x d
  Vector bias_;
};

}  // namespace phonadv

#endif  // PHONADV_MODEL_H_
