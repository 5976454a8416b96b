// Copyright 2026 The LRME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lrme/term.hpp"

#include <cctype>
#include <cstdint>

#include "lrme/error.hpp"

namespace lrme {
namespace {

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

}  // namespace

std::string NormalizeToken(std::string_view raw, const TokenizerConfig& config) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  if (config.strip_punctuation) {
    while (begin < end && IsAsciiPunct(static_cast<unsigned char>(raw[begin]))) {
      ++begin;
    }
    while (end > begin &&
           IsAsciiPunct(static_cast<unsigned char>(raw[end - 1]))) {
      --end;
    }
  }
  std::string out(raw.substr(begin, end - begin));
  if (config.lowercase) {
    for (char& c : out) {
      const auto u = static_cast<unsigned char>(c);
      if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() &&
           !IsAsciiSpace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j > i) {
      std::string token = NormalizeToken(text.substr(i, j - i), config);
      if (!token.empty()) tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

Term::Term(std::string_view surface, const TokenizerConfig& config)
    : tokens_(Tokenize(surface, config)), surface_(surface) {
  if (tokens_.empty()) {
    throw DataError("term '" + std::string(surface) + "' has no word tokens");
  }
  for (const auto& t : tokens_) {
    if (!key_.empty()) key_ += ' ';
    key_ += t;
  }
}

TermPair::TermPair(Term first, Term second)
    : x(std::move(first)), y(std::move(second)) {
  if (x == y) {
    throw DataError("pair '" + x.key() + ":" + y.key() +
                    "' repeats the same term");
  }
}

bool IsValidUtf8(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    int extra = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and values past U+10FFFF.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

}  // namespace lrme
