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

#ifndef LRME_CORPUS_HPP_
#define LRME_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lrme/term.hpp"

namespace lrme {

using TokenId = std::uint32_t;

struct Position {
  std::uint32_t document = 0;
  std::uint32_t offset = 0;

  friend auto operator<=>(const Position&, const Position&) = default;
};

// Half-open token range [begin, end) inside one document.
struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t length() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

// One window matching "[0-1 words] x [0-3 words] y [0-1 words]". Leading and
// trailing context are taken greedily: a context word is included whenever the
// document has one.
struct PhraseOccurrence {
  std::uint32_t document = 0;
  Span window;
  Span x_span;
  Span y_span;

  std::uint32_t pre() const { return x_span.begin - window.begin; }
  std::uint32_t mid() const { return y_span.begin - x_span.end; }
  std::uint32_t post() const { return window.end - y_span.end; }

  friend bool operator==(const PhraseOccurrence&,
                         const PhraseOccurrence&) = default;
};

struct CooccurrenceCounts {
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  std::uint64_t count_ab = 0;

  friend bool operator==(const CooccurrenceCounts&,
                         const CooccurrenceCounts&) = default;
};

inline constexpr std::uint32_t kMaxPreWords = 1;
inline constexpr std::uint32_t kMaxMidWords = 3;
inline constexpr std::uint32_t kMaxPostWords = 1;

// Immutable token index over a set of documents (one document per file).
class CorpusIndex {
 public:
  CorpusIndex() = default;

  // Builds an index from already-read documents. `names` label the documents
  // (normally file paths) and feed the content digest together with the text.
  static CorpusIndex FromTexts(std::span<const std::string> names,
                               std::span<const std::string> texts,
                               const TokenizerConfig& config = {});

  std::size_t document_count() const { return documents_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::string& digest() const { return digest_; }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }
  const std::string& document_name(std::size_t doc) const {
    return names_.at(doc);
  }

  std::span<const TokenId> document(std::size_t doc) const {
    return documents_.at(doc);
  }
  const std::string& word(TokenId id) const { return vocabulary_.at(id); }
  std::optional<TokenId> Lookup(std::string_view token) const;

  // Sorted, duplicate-free occurrence positions of a single token.
  std::span<const Position> Postings(std::string_view token) const;

  // Start positions of every contiguous occurrence of the term.
  std::vector<Position> Occurrences(const Term& term) const;

  // Writes a line-oriented cache file. Load(Save(index)) yields an index with
  // identical documents, postings, and digest.
  void Save(const std::filesystem::path& path) const;
  static CorpusIndex Load(const std::filesystem::path& path);

 private:
  void AddDocument(std::string name, const std::vector<std::string>& tokens);
  void FinishPostings();

  TokenizerConfig tokenizer_;
  std::vector<std::string> names_;
  std::vector<std::vector<TokenId>> documents_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TokenId> token_ids_;
  std::vector<std::vector<Position>> postings_;
  std::uint64_t total_tokens_ = 0;
  std::string digest_;
};

// Reads and indexes the given files in the given order. Throws DataError
// naming the path for unreadable or non-UTF-8 files.
CorpusIndex Ingest(std::span<const std::filesystem::path> paths,
                   const TokenizerConfig& config = {});

// Every regular `.txt` file below `dir`, recursively, in lexicographic path
// order. Throws UsageError when `dir` is not a directory.
std::vector<std::filesystem::path> ListCorpusFiles(
    const std::filesystem::path& dir);

// SHA-256 over (relative name, content) of every corpus file, hex encoded.
// Reads the files but does not tokenize them.
std::string CorpusDigest(const std::filesystem::path& dir);

// Loads `<cache_dir>/corpus-<digest>.idx` when present, otherwise ingests the
// directory and writes that file. `cache_hit` reports which path was taken.
CorpusIndex OpenCorpus(const std::filesystem::path& dir,
                       const std::optional<std::filesystem::path>& cache_dir,
                       bool* cache_hit = nullptr,
                       const TokenizerConfig& config = {});

// All windows where `pair.x` is followed by 0-3 words and then `pair.y`, in
// (document, x offset, y offset) order. `max_occurrences` of 0 means no cap.
std::vector<PhraseOccurrence> SearchPhrases(const CorpusIndex& index,
                                            const TermPair& pair,
                                            std::size_t max_occurrences = 0);

// Occurrence counts of `a` and `b`, plus the number of unordered occurrence
// pairs (one of each term, same document, non-overlapping spans) whose start
// offsets are at most `window` tokens apart. When a == b each unordered pair
// of distinct occurrences counts once.
CooccurrenceCounts CountCooccurrences(const CorpusIndex& index, const Term& a,
                                      const Term& b, std::uint32_t window);

}  // namespace lrme

#endif  // LRME_CORPUS_HPP_
