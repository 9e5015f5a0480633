// src/core.cpp

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

#include "structseq/core.hpp"

#include <string>

#include "structseq/error.hpp"

namespace structseq {

Eigen::VectorXd one_hot(int label, int num_labels) {
  if (label < 0 || label >= num_labels)
    throw InvalidArgument("one_hot label " + std::to_string(label) +
                          " outside [0, " + std::to_string(num_labels) + ")");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(num_labels);
  v(label) = 1.0;
  return v;
}

Eigen::VectorXd tensor_product(const Eigen::Ref<const Eigen::VectorXd> &a,
                               const Eigen::Ref<const Eigen::VectorXd> &b) {
  const Eigen::Index p = a.size(), q = b.size();
  if (p < 1 || q < 1)
    throw InvalidArgument("tensor_product needs non-empty operands");
  Eigen::VectorXd out(p * q);
  // Column-major fill of the outer product gives index i + j*p.
  Eigen::Map<Eigen::MatrixXd>(out.data(), p, q) = a * b.transpose();
  return out;
}

}  // namespace structseq
