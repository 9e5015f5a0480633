// include/structseq/gradcheck.hpp

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

#ifndef STRUCTSEQ_GRADCHECK_HPP
#define STRUCTSEQ_GRADCHECK_HPP

#include <cstdint>
#include <string>

namespace structseq {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_coordinate;

  bool passed(double tolerance = 1e-4) const {
    return max_relative_error < tolerance;
  }
};

/// |a-b| / max(|a|, |b|, 1e-6).
double relative_error(double a, double b);

// Each suite compares backprop against central finite differences
// (eps = 1e-5) over `cases` random configurations. `sabotage` flips the sign
// of one analytic coordinate per case as a negative control.

GradCheckReport gradcheck_mlp(std::uint64_t seed, int cases,
                              bool sabotage = false);

GradCheckReport gradcheck_losses(std::uint64_t seed, int cases,
                                 bool sabotage = false);

GradCheckReport gradcheck_fsdnn(std::uint64_t seed, int cases,
                                bool sabotage = false);

}  // namespace structseq

#endif  // STRUCTSEQ_GRADCHECK_HPP
