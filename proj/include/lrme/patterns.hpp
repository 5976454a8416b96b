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

#ifndef LRME_PATTERNS_HPP_
#define LRME_PATTERNS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lrme/corpus.hpp"
#include "lrme/problem.hpp"
#include "lrme/sparse_matrix.hpp"
#include "lrme/term.hpp"

namespace lrme {

// A wildcard template over a phrase window, e.g. "a X centered Y *". Holds
// exactly one X slot and one Y slot; "*" matches any single word.
class Pattern {
 public:
  enum class SlotKind : std::uint8_t { kLiteral, kX, kY, kWildcard };
  struct Slot {
    SlotKind kind = SlotKind::kWildcard;
    std::string word;  // only for kLiteral

    friend bool operator==(const Slot&, const Slot&) = default;
  };

  Pattern() = default;
  // Throws DataError unless the slots hold one X and one Y with at most one
  // slot before the first of them, at most three between, and at most one
  // after.
  explicit Pattern(std::vector<Slot> slots);

  // Parses the serialized form ("X", "Y", "*" or a lowercase literal per
  // space-separated token).
  static Pattern Parse(std::string_view text);

  const std::vector<Slot>& slots() const { return slots_; }
  // Tokens joined by single spaces; X and Y literal, "*" for wildcards.
  const std::string& str() const { return text_; }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.text_ == b.text_;
  }
  friend bool operator<(const Pattern& a, const Pattern& b) {
    return a.text_ < b.text_;
  }

 private:
  std::vector<Slot> slots_;
  std::string text_;
};

// Every ordered pair a_i:a_j (i != j) within each source list and each target
// list, deduplicated across the batch in first-seen order. Validates each
// problem first.
std::vector<TermPair> BuildPairList(std::span<const MappingProblem> problems);

// Patterns from one phrase window: x replaced by X and y by Y, then the
// swapped substitution, with each of the n remaining words either kept or
// wildcarded. At most 2^(n+1) distinct patterns, returned sorted.
// `window` holds the window's words; the spans are relative to the window.
// Throws InternalError when the words at the spans are not the pair's tokens.
std::vector<Pattern> GeneratePatterns(std::span<const std::string> window,
                                      Span x_span, Span y_span,
                                      const TermPair& pair);
std::vector<Pattern> GeneratePatterns(const CorpusIndex& index,
                                      const PhraseOccurrence& phrase,
                                      const TermPair& pair);
// Serialized forms of GeneratePatterns, sorted and distinct.
std::vector<std::string> GeneratePatternStrings(
    std::span<const std::string> window, Span x_span, Span y_span,
    const TermPair& pair);

// Per-pair pattern counts gathered while generating patterns. The row of a
// pair counts, for each pattern, how many of that pair's phrase occurrences
// generated it.
class PatternStats {
 public:
  explicit PatternStats(std::size_t pair_count = 0) : rows_(pair_count) {}

  // Records every pattern of one phrase occurrence of pair `row`.
  void AddPhrase(std::size_t row, std::span<const Pattern> patterns);
  // Same, with patterns given in serialized form.
  void AddPhrase(std::size_t row, std::span<const std::string> patterns);
  // Commutative merge of another stats object over the same pair list.
  void Merge(const PatternStats& other);

  std::size_t pair_count() const { return rows_.size(); }
  std::size_t pattern_count() const { return generating_pairs_.size(); }
  // Number of distinct pairs with a nonzero count for `pattern`.
  std::uint32_t GeneratingPairs(const std::string& pattern) const;
  std::uint32_t Count(std::size_t row, const std::string& pattern) const;
  const std::unordered_map<std::string, std::uint32_t>& Row(
      std::size_t row) const {
    return rows_.at(row);
  }
  const std::unordered_map<std::string, std::uint32_t>& generating_pairs()
      const {
    return generating_pairs_;
  }

 private:
  std::vector<std::unordered_map<std::string, std::uint32_t>> rows_;
  std::unordered_map<std::string, std::uint32_t> generating_pairs_;
};

// Drops pair x:y when neither x:y nor y:x has any phrase. `phrase_counts` is
// parallel to `pairs`; the reversed pair is looked up in the same list and
// counts as phrase-less when absent. Input order is preserved.
std::vector<std::size_t> PruneRows(std::span<const TermPair> pairs,
                                   std::span<const std::size_t> phrase_counts);

// Patterns ordered by descending generating-pair count, ties broken by
// ascending serialization; the first min(t * n_r, total) are returned.
// Throws UsageError when t <= 0.
std::vector<Pattern> SelectColumns(const PatternStats& stats, int t,
                                   std::size_t n_r);

// f_ij = number of phrase occurrences of row pair i generating column pattern
// j. `rows` index into the stats' pair list. Throws InternalError on
// duplicate row or column labels.
SparseMatrix BuildFrequencyMatrix(std::span<const std::size_t> rows,
                                  std::span<const Pattern> cols,
                                  const PatternStats& stats);

// Result of phrase retrieval and pattern generation over a batch of
// problems, before column selection.
struct MinedPatterns {
  std::vector<TermPair> pairs;              // R before pruning
  std::vector<std::size_t> phrase_counts;   // |S(r)| parallel to pairs
  std::vector<std::size_t> kept_rows;       // indices into pairs after pruning
  PatternStats stats;
  std::uint64_t total_phrases = 0;
};

struct MiningOptions {
  // Cap on retrieved phrase occurrences per pair; 0 disables the cap.
  std::size_t max_phrases_per_pair = 0;
};

MinedPatterns MinePatterns(const CorpusIndex& index,
                           std::span<const MappingProblem> problems,
                           const MiningOptions& options = {});

// Frequency matrix with its labels.
struct PairPatternMatrix {
  std::vector<TermPair> rows;
  std::vector<Pattern> cols;
  SparseMatrix frequencies;
};

PairPatternMatrix AssembleMatrix(const MinedPatterns& mined, int t);

}  // namespace lrme

#endif  // LRME_PATTERNS_HPP_
