// include/structseq/log.hpp

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

#ifndef STRUCTSEQ_LOG_HPP
#define STRUCTSEQ_LOG_HPP

#include <sstream>
#include <string>

namespace structseq {

// Verbosity comes from the STRUCTSEQ_LOG environment variable:
// 0 = warnings only, 1 = progress (default), 2 = per-epoch detail.
int log_verbosity();

/// Line-buffered logger; the message is flushed to stderr on destruction.
/// Usage: Log(1) << "epoch " << e << " loss " << loss;
class Log {
 public:
  explicit Log(int level) : level_(level) {}
  ~Log();

  template <typename T>
  Log &operator<<(const T &value) {
    if (level_ <= log_verbosity()) stream_ << value;
    return *this;
  }

 private:
  int level_;
  std::ostringstream stream_;
};

}  // namespace structseq

#endif  // STRUCTSEQ_LOG_HPP
