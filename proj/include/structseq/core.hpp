// include/structseq/core.hpp

// Copyright 2026  The structseq authors

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

#ifndef STRUCTSEQ_CORE_HPP
#define STRUCTSEQ_CORE_HPP

#include <Eigen/Dense>

#include "structseq/types.hpp"

namespace structseq {

/// Indicator vector of length num_labels with a single 1 at `label`.
Eigen::VectorXd one_hot(int label, int num_labels);

/// Tensor product of two vectors, dimensions P and Q, giving a vector of
/// dimension P*Q whose entry at index i + j*P (zero-based) is a(i) * b(j).
/// Equivalently the column-major flattening of the outer product a b^T.
Eigen::VectorXd tensor_product(const Eigen::Ref<const Eigen::VectorXd> &a,
                               const Eigen::Ref<const Eigen::VectorXd> &b);

}  // namespace structseq

#endif  // STRUCTSEQ_CORE_HPP
