// src/textio.cpp

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

#include "structseq/textio.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <sstream>

#include "structseq/error.hpp"

namespace structseq {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string &token, const std::string &context) {
  const char *begin = token.c_str();
  char *end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError(context + ": bad number '" + token + "'");
  }
  return value;
}

long long parse_long(const std::string &token, const std::string &context) {
  const char *begin = token.c_str();
  char *end = nullptr;
  long long value = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParseError(context + ": bad integer '" + token + "'");
  }
  return value;
}

int parse_int(const std::string &token, const std::string &context) {
  long long value = parse_long(token, context);
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max()) {
    throw ParseError(context + ": integer out of range '" + token + "'");
  }
  return static_cast<int>(value);
}

std::vector<std::string> split_tokens(const std::string &line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

bool LineReader::next(std::string *line) {
  if (!std::getline(is_, *line)) {
    return false;
  }
  if (!line->empty() && line->back() == '\r') {
    line->pop_back();
  }
  ++line_number_;
  return true;
}

bool LineReader::next_nonempty(std::string *line) {
  while (next(line)) {
    if (line->find_first_not_of(" \t") != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> LineReader::expect_tokens(int n,
                                                   const std::string &what) {
  std::vector<std::string> tokens = expect_line_tokens(what);
  if (static_cast<int>(tokens.size()) != n) {
    throw ParseError(context() + ": expected " + std::to_string(n) +
                     " tokens for " + what + ", got " +
                     std::to_string(tokens.size()));
  }
  return tokens;
}

std::vector<std::string> LineReader::expect_line_tokens(
    const std::string &what) {
  std::string line;
  if (!next_nonempty(&line)) {
    throw ParseError(context() + ": unexpected end of input reading " + what);
  }
  return split_tokens(line);
}

}  // namespace structseq
