// include/structseq/error.hpp

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

#ifndef STRUCTSEQ_ERROR_HPP
#define STRUCTSEQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace structseq {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// A value is out of its domain (bad label, empty sequence, K < 2, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Dimensions of paired objects do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Bad command-line or training configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file content; message carries the line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File header does not announce a format this build understands.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// A model file holds a different kind of model than the caller asked for.
class KindError : public Error {
 public:
  using Error::Error;
};

/// A lattice violates its structural invariants.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Numeric failure: exceeded enumeration budget, non-finite loss, failed check.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace structseq

#endif  // STRUCTSEQ_ERROR_HPP
