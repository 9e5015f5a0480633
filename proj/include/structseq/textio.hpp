// include/structseq/textio.hpp

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

#ifndef STRUCTSEQ_TEXTIO_HPP
#define STRUCTSEQ_TEXTIO_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace structseq {

/// Shortest decimal form that round-trips the double exactly (%.17g).
std::string format_double(double value);

/// strtod with full-token validation; context goes into the error message.
double parse_double(const std::string &token, const std::string &context);

long long parse_long(const std::string &token, const std::string &context);
int parse_int(const std::string &token, const std::string &context);

std::vector<std::string> split_tokens(const std::string &line);

// Line-oriented reader that tracks the line number so parse errors can say
// where they happened.
class LineReader {
 public:
  explicit LineReader(std::istream &is) : is_(is) {}

  /// Next line verbatim; false at end of stream.
  bool next(std::string *line);

  /// Skips blank lines.
  bool next_nonempty(std::string *line);

  /// Next non-empty line split into exactly n tokens, else ParseError.
  std::vector<std::string> expect_tokens(int n, const std::string &what);

  /// Next non-empty line split into however many tokens it holds; ParseError
  /// at end of stream.
  std::vector<std::string> expect_line_tokens(const std::string &what);

  int line_number() const { return line_number_; }
  std::string context() const { return "line " + std::to_string(line_number_); }

 private:
  std::istream &is_;
  int line_number_ = 0;
};

}  // namespace structseq

#endif  // STRUCTSEQ_TEXTIO_HPP
