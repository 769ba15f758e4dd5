// include/phonadv/types.h

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

#ifndef PHONADV_TYPES_H_
#define PHONADV_TYPES_H_

#include <Eigen/Dense>

namespace phonadv {

/// Dense row-by-frame matrix used for representations, logits and gradients.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace phonadv

#endif  // PHONADV_TYPES_H_
