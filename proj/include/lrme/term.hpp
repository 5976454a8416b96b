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

#ifndef LRME_TERM_HPP_
#define LRME_TERM_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lrme {

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
};

// Normalizes one whitespace-delimited chunk of text: ASCII lowercasing and
// removal of leading and trailing ASCII punctuation. Bytes >= 0x80 (UTF-8
// continuation and lead bytes) are left untouched. May return an empty string.
std::string NormalizeToken(std::string_view raw,
                           const TokenizerConfig& config = {});

// Splits on whitespace and normalizes; chunks that normalize to nothing are
// dropped.
std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& config = {});

// A (possibly multiword) vocabulary item. Two terms are equal when their
// normalized token sequences are equal; the surface form is display only.
class Term {
 public:
  Term() = default;

  // Throws DataError when the surface normalizes to zero tokens.
  explicit Term(std::string_view surface, const TokenizerConfig& config = {});

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& surface() const { return surface_; }
  std::size_t size() const { return tokens_.size(); }

  // Tokens joined by single spaces. Used as the identity of the term.
  const std::string& key() const { return key_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.key_ == b.key_;
  }
  friend bool operator<(const Term& a, const Term& b) { return a.key_ < b.key_; }

 private:
  std::vector<std::string> tokens_;
  std::string surface_;
  std::string key_;
};

// An ordered pair x:y of distinct terms.
struct TermPair {
  Term x;
  Term y;

  TermPair() = default;
  // Throws DataError when x == y.
  TermPair(Term first, Term second);

  TermPair Reversed() const { return TermPair(y, x); }

  // Term keys joined by a tab; tokens never contain whitespace.
  std::string key() const { return x.key() + '\t' + y.key(); }

  friend bool operator==(const TermPair& a, const TermPair& b) {
    return a.x == b.x && a.y == b.y;
  }
};

// True when `text` is well-formed UTF-8.
bool IsValidUtf8(std::string_view text);

}  // namespace lrme

template <>
struct std::hash<lrme::Term> {
  std::size_t operator()(const lrme::Term& t) const noexcept {
    return std::hash<std::string>()(t.key());
  }
};

#endif  // LRME_TERM_HPP_
