// src/log.cpp

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

#include "structseq/log.hpp"

#include <cstdlib>
#include <iostream>

namespace structseq {

int log_verbosity() {
  static const int level = [] {
    const char *env = std::getenv("STRUCTSEQ_LOG");
    if (env == nullptr || *env == '\0') return 1;
    char *end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == env) return 1;
    return static_cast<int>(value);
  }();
  return level;
}

Log::~Log() {
  if (level_ <= log_verbosity()) std::cerr << stream_.str() << std::endl;
}

}  // namespace structseq
