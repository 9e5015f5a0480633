// include/structseq/rng.hpp

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

#ifndef STRUCTSEQ_RNG_HPP
#define STRUCTSEQ_RNG_HPP

#include <cstdint>
#include <random>

namespace structseq {

// splitmix64 finalizer; used to derive independent substreams from one seed
// so that shuffling epochs or reordering utterances cannot couple streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b = 0) {
  return mix64(seed ^ mix64(a ^ mix64(b)));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0) {
  return std::mt19937_64(substream(seed, a, b));
}

}  // namespace structseq

#endif  // STRUCTSEQ_RNG_HPP
