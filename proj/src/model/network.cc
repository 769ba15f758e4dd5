// src/model/network.cc

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

#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "phonadv/model.h"
#include "phonadv/rng.h"

namespace phonadv {
namespace {

using ConstMatrixMap = Eigen::Map<const Matrix>;
using ConstVectorMap = Eigen::Map<const Vector>;
using MatrixMap = Eigen::Map<Matrix>;

struct Views {
  ConstMatrixMap w1, conv, w2, w3;
  ConstVectorMap b1, conv_bias, b2, b3;
};

Views ViewsOf(const ModelLayout& l, const double* p) {
  const int h = l.hidden;
  return Views{ConstMatrixMap(p + l.w1(), h, l.input_dim),
               ConstMatrixMap(p + l.conv(), h, ModelLayout::kKernel),
               ConstMatrixMap(p + l.w2(), h, h),
               ConstMatrixMap(p + l.w3(), l.num_symbols(), h),
               ConstVectorMap(p + l.b1(), h),
               ConstVectorMap(p + l.conv_bias(), h),
               ConstVectorMap(p + l.b2(), h),
               ConstVectorMap(p + l.b3(), l.num_symbols())};
}

constexpr int kHalfKernel = ModelLayout::kKernel / 2;

}  // namespace

Eigen::Index ModelLayout::NumParams() const { return b3() + num_symbols(); }

ModelState ModelState::Zeros(const ModelLayout& layout) {
  if (layout.input_dim <= 0 || layout.hidden <= 0 || layout.vocab <= 0)
    throw std::invalid_argument("model layout dimensions must be positive");
  ModelState s;
  s.layout = layout;
  const Eigen::Index n = layout.NumParams();
  s.params = Vector::Zero(n);
  s.adam_m = Vector::Zero(n);
  s.adam_v = Vector::Zero(n);
  return s;
}

ModelState ModelState::Initialize(const ModelLayout& layout, uint64_t seed) {
  ModelState s = Zeros(layout);
  Rng rng = StreamRng(seed, {0x1417});
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](Eigen::Index offset, Eigen::Index count, double stddev) {
    for (Eigen::Index i = 0; i < count; ++i) s.params(offset + i) = normal(rng) * stddev;
  };
  const int h = layout.hidden;
  fill(layout.w1(), static_cast<Eigen::Index>(h) * layout.input_dim,
       1.0 / std::sqrt(static_cast<double>(layout.input_dim)));
  fill(layout.conv(), static_cast<Eigen::Index>(h) * ModelLayout::kKernel,
       1.0 / std::sqrt(static_cast<double>(ModelLayout::kKernel)));
  fill(layout.w2(), static_cast<Eigen::Index>(h) * h, 1.0 / std::sqrt(static_cast<double>(h)));
  fill(layout.w3(), static_cast<Eigen::Index>(layout.num_symbols()) * h,
       1.0 / std::sqrt(static_cast<double>(h)));
  return s;
}

void StandardizeInputLayer(ModelState& state, const Vector& mean, const Vector& stddev) {
  const ModelLayout& l = state.layout;
  if (mean.size() != l.input_dim || stddev.size() != l.input_dim)
    throw std::invalid_argument("standardize: statistics width does not match the model");
  if (!(stddev.array() > 0.0).all() || !stddev.allFinite() || !mean.allFinite())
    throw std::invalid_argument("standardize: standard deviations must be positive and finite");
  MatrixMap w1(state.params.data() + l.w1(), l.hidden, l.input_dim);
  Eigen::Map<Vector> b1(state.params.data() + l.b1(), l.hidden);
  w1 = w1 * stddev.cwiseInverse().asDiagonal();
  b1 -= w1 * mean;
}

ForwardResult Forward(const Matrix& z, const ModelState& state) {
  const ModelLayout& l = state.layout;
  if (z.cols() != l.input_dim)
    throw std::invalid_argument("model: input width " + std::to_string(z.cols()) +
                                " does not match model width " +
                                std::to_string(l.input_dim));
  const Views v = ViewsOf(l, state.params.data());
  const Eigen::Index frames = z.rows();

  ForwardResult r;
  Tape& tape = r.tape;
  tape.layout = l;
  tape.step_count = state.step_count;
  tape.params = state.params.data();
  tape.input = z;

  tape.h1.noalias() = z * v.w1.transpose();
  tape.h1.rowwise() += v.b1.transpose();
  tape.h1 = tape.h1.array().tanh().matrix();

  tape.mixed.resize(frames, l.hidden);
  tape.mixed.rowwise() = v.conv_bias.transpose();
  for (int o = -kHalfKernel; o <= kHalfKernel; ++o) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, -o);
    const Eigen::Index hi = std::min<Eigen::Index>(frames, frames - o);
    if (hi <= lo) continue;
    const auto tap = v.conv.col(o + kHalfKernel).transpose().array();
    tape.mixed.middleRows(lo, hi - lo).array() +=
        tape.h1.middleRows(lo + o, hi - lo).array().rowwise() * tap;
  }

  tape.h2.noalias() = tape.mixed * v.w2.transpose();
  tape.h2.rowwise() += v.b2.transpose();
  tape.h2 = tape.h2.array().tanh().matrix();

  r.logits.noalias() = tape.h2 * v.w3.transpose();
  r.logits.rowwise() += v.b3.transpose();
  return r;
}

Gradients Backward(const Tape& tape, const ModelState& state,
                   const Matrix& grad_logits, bool want_param_grads) {
  const ModelLayout& l = state.layout;
  if (tape.step_count != state.step_count || tape.params != state.params.data() ||
      !(tape.layout == l))
    throw StaleTapeError("model: tape was recorded against different parameters");
  const Eigen::Index frames = tape.input.rows();
  if (grad_logits.rows() != frames || grad_logits.cols() != l.num_symbols())
    throw std::invalid_argument("model: grad_logits shape mismatch");
  const Views v = ViewsOf(l, state.params.data());

  Gradients g;
  double* gp = nullptr;
  if (want_param_grads) {
    g.params = Vector::Zero(l.NumParams());
    gp = g.params.data();
  }

  if (gp) {
    MatrixMap(gp + l.w3(), l.num_symbols(), l.hidden).noalias() =
        grad_logits.transpose() * tape.h2;
    Eigen::Map<Vector>(gp + l.b3(), l.num_symbols()) = grad_logits.colwise().sum().transpose();
  }
  Matrix grad_a2 = grad_logits * v.w3;
  grad_a2.array() *= 1.0 - tape.h2.array().square();

  if (gp) {
    MatrixMap(gp + l.w2(), l.hidden, l.hidden).noalias() = grad_a2.transpose() * tape.mixed;
    Eigen::Map<Vector>(gp + l.b2(), l.hidden) = grad_a2.colwise().sum().transpose();
  }
  const Matrix grad_mixed = grad_a2 * v.w2;

  Matrix grad_h1 = Matrix::Zero(frames, l.hidden);
  for (int o = -kHalfKernel; o <= kHalfKernel; ++o) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, -o);
    const Eigen::Index hi = std::min<Eigen::Index>(frames, frames - o);
    if (hi <= lo) continue;
    const auto tap = v.conv.col(o + kHalfKernel).transpose().array();
    grad_h1.middleRows(lo + o, hi - lo).array() +=
        grad_mixed.middleRows(lo, hi - lo).array().rowwise() * tap;
    if (gp) {
      Eigen::Map<Vector>(gp + l.conv() + static_cast<Eigen::Index>(o + kHalfKernel) * l.hidden,
                         l.hidden) =
          (grad_mixed.middleRows(lo, hi - lo).array() *
           tape.h1.middleRows(lo + o, hi - lo).array())
              .colwise()
              .sum()
              .transpose();
    }
  }
  if (gp)
    Eigen::Map<Vector>(gp + l.conv_bias(), l.hidden) = grad_mixed.colwise().sum().transpose();

  grad_h1.array() *= 1.0 - tape.h1.array().square();
  if (gp) {
    MatrixMap(gp + l.w1(), l.hidden, l.input_dim).noalias() = grad_h1.transpose() * tape.input;
    Eigen::Map<Vector>(gp + l.b1(), l.hidden) = grad_h1.colwise().sum().transpose();
  }
  g.input.noalias() = grad_h1 * v.w1;
  return g;
}

LogitsModel::Linearization NetworkModel::Linearize(const Matrix& z) const {
  auto fwd = std::make_shared<ForwardResult>(Forward(z, state_));
  Linearization lin;
  lin.logits = fwd->logits;
  const ModelState* state = &state_;
  lin.input_vjp = [fwd, state](const Matrix& grad_logits) {
    return Backward(fwd->tape, *state, grad_logits, /*want_param_grads=*/false).input;
  };
  return lin;
}

Matrix NetworkModel::Logits(const Matrix& z) const { return Forward(z, state_).logits; }

AffineFrameModel::AffineFrameModel(Matrix weight, Vector bias)
    : weight_(std::move(weight)), bias_(std::move(bias)) {
  if (bias_.size() != weight_.rows())
    throw std::invalid_argument("affine model: bias/weight shape mismatch");
}

LogitsModel::Linearization AffineFrameModel::Linearize(const Matrix& z) const {
  if (z.cols() != weight_.cols())
    throw std::invalid_argument("affine model: input width mismatch");
  Linearization lin;
  lin.logits = z * weight_.transpose();
  lin.logits.rowwise() += bias_.transpose();
  const Matrix w = weight_;
  lin.input_vjp = [w](const Matrix& grad_logits) -> Matrix { return grad_logits * w; };
  return lin;
}

}  // namespace phonadv
