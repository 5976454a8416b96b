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

#include "lrme/patterns.hpp"

#include <algorithm>
#include <unordered_set>

#include "lrme/error.hpp"

namespace lrme {
namespace {

std::string Serialize(const std::vector<Pattern::Slot>& slots) {
  std::string text;
  for (const auto& slot : slots) {
    if (!text.empty()) text += ' ';
    switch (slot.kind) {
      case Pattern::SlotKind::kLiteral:
        text += slot.word;
        break;
      case Pattern::SlotKind::kX:
        text += 'X';
        break;
      case Pattern::SlotKind::kY:
        text += 'Y';
        break;
      case Pattern::SlotKind::kWildcard:
        text += '*';
        break;
    }
  }
  return text;
}

}  // namespace

Pattern::Pattern(std::vector<Slot> slots) : slots_(std::move(slots)) {
  int x_at = -1;
  int y_at = -1;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const auto& slot = slots_[i];
    if (slot.kind == SlotKind::kX) {
      if (x_at >= 0) throw DataError("pattern has more than one X slot");
      x_at = static_cast<int>(i);
    } else if (slot.kind == SlotKind::kY) {
      if (y_at >= 0) throw DataError("pattern has more than one Y slot");
      y_at = static_cast<int>(i);
    } else if (slot.kind == SlotKind::kLiteral) {
      if (slot.word.empty() ||
          slot.word.find_first_of(" \t\n\r") != std::string::npos) {
        throw DataError("pattern literal must be a single word");
      }
    }
  }
  if (x_at < 0 || y_at < 0) throw DataError("pattern needs an X and a Y slot");
  const int first = std::min(x_at, y_at);
  const int second = std::max(x_at, y_at);
  const int after = static_cast<int>(slots_.size()) - second - 1;
  if (first > static_cast<int>(kMaxPreWords) ||
      second - first - 1 > static_cast<int>(kMaxMidWords) ||
      after > static_cast<int>(kMaxPostWords)) {
    throw DataError("pattern layout exceeds the phrase template");
  }
  text_ = Serialize(slots_);
}

Pattern Pattern::Parse(std::string_view text) {
  std::vector<Slot> slots;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) {
      std::string_view tok = text.substr(i, j - i);
      Slot slot;
      if (tok == "X") {
        slot.kind = SlotKind::kX;
      } else if (tok == "Y") {
        slot.kind = SlotKind::kY;
      } else if (tok == "*") {
        slot.kind = SlotKind::kWildcard;
      } else {
        slot.kind = SlotKind::kLiteral;
        slot.word = std::string(tok);
      }
      slots.push_back(std::move(slot));
    }
    i = j;
  }
  return Pattern(std::move(slots));
}

std::vector<TermPair> BuildPairList(std::span<const MappingProblem> problems) {
  std::vector<TermPair> pairs;
  std::unordered_set<std::string> seen;
  auto add_all = [&](const std::vector<Term>& terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        if (i == j) continue;
        TermPair pair(terms[i], terms[j]);
        if (seen.insert(pair.key()).second) pairs.push_back(std::move(pair));
      }
    }
  };
  for (const auto& problem : problems) {
    problem.Validate();
    add_all(problem.source);
    add_all(problem.target);
  }
  return pairs;
}

std::vector<std::string> GeneratePatternStrings(
    std::span<const std::string> window, Span x_span, Span y_span,
    const TermPair& pair) {
  const auto n = static_cast<std::uint32_t>(window.size());
  if (x_span.end > y_span.begin || y_span.end > n ||
      x_span.begin >= x_span.end || y_span.begin >= y_span.end) {
    throw InternalError("phrase spans are inconsistent with the window");
  }
  auto matches = [&](Span span, const Term& term) {
    return span.length() == term.size() &&
           std::equal(term.tokens().begin(), term.tokens().end(),
                      window.begin() + span.begin);
  };
  if (!matches(x_span, pair.x) || !matches(y_span, pair.y)) {
    throw InternalError("phrase does not hold the pair '" + pair.x.key() +
                        ":" + pair.y.key() + "' at the recorded spans");
  }

  // Layout of the window with each term collapsed to one marker. Marker 0 is
  // the x term, 1 the y term; other entries index remaining words.
  struct Item {
    int marker = -1;
    std::uint32_t word = 0;
  };
  std::vector<Item> layout;
  std::vector<std::uint32_t> remaining;
  for (std::uint32_t i = 0; i < n;) {
    if (i == x_span.begin) {
      layout.push_back({0, 0});
      i = x_span.end;
    } else if (i == y_span.begin) {
      layout.push_back({1, 0});
      i = y_span.end;
    } else {
      layout.push_back({-1, static_cast<std::uint32_t>(remaining.size())});
      remaining.push_back(i);
      ++i;
    }
  }
  const auto free_words = remaining.size();
  if (free_words > 20) throw InternalError("phrase window too long");

  std::vector<std::string> out;
  out.reserve(std::size_t{2} << free_words);
  for (int swapped = 0; swapped < 2; ++swapped) {
    const char x_label = swapped ? 'Y' : 'X';
    const char y_label = swapped ? 'X' : 'Y';
    for (std::uint32_t mask = 0; mask < (1u << free_words); ++mask) {
      std::string text;
      for (const Item& item : layout) {
        if (!text.empty()) text += ' ';
        if (item.marker == 0) {
          text += x_label;
        } else if (item.marker == 1) {
          text += y_label;
        } else if (mask & (1u << item.word)) {
          text += '*';
        } else {
          text += window[remaining[item.word]];
        }
      }
      out.push_back(std::move(text));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Pattern> GeneratePatterns(std::span<const std::string> window,
                                      Span x_span, Span y_span,
                                      const TermPair& pair) {
  std::vector<Pattern> out;
  for (const auto& text : GeneratePatternStrings(window, x_span, y_span, pair)) {
    out.push_back(Pattern::Parse(text));
  }
  return out;
}

namespace {

// Window words plus spans rebased to the window start.
struct WindowView {
  std::vector<std::string> words;
  Span x_span;
  Span y_span;
};

WindowView ViewOf(const CorpusIndex& index, const PhraseOccurrence& phrase) {
  WindowView view;
  const auto doc = index.document(phrase.document);
  if (phrase.window.end > doc.size()) {
    throw InternalError("phrase window past the end of its document");
  }
  for (std::uint32_t i = phrase.window.begin; i < phrase.window.end; ++i) {
    view.words.push_back(index.word(doc[i]));
  }
  const std::uint32_t base = phrase.window.begin;
  view.x_span = {phrase.x_span.begin - base, phrase.x_span.end - base};
  view.y_span = {phrase.y_span.begin - base, phrase.y_span.end - base};
  return view;
}

}  // namespace

std::vector<Pattern> GeneratePatterns(const CorpusIndex& index,
                                      const PhraseOccurrence& phrase,
                                      const TermPair& pair) {
  WindowView view = ViewOf(index, phrase);
  return GeneratePatterns(view.words, view.x_span, view.y_span, pair);
}

void PatternStats::AddPhrase(std::size_t row, std::span<const Pattern> patterns) {
  std::vector<std::string> texts;
  texts.reserve(patterns.size());
  for (const auto& p : patterns) texts.push_back(p.str());
  AddPhrase(row, texts);
}

void PatternStats::AddPhrase(std::size_t row,
                             std::span<const std::string> patterns) {
  auto& counts = rows_.at(row);
  for (const auto& text : patterns) {
    auto [it, inserted] = counts.try_emplace(text, 0);
    ++it->second;
    if (inserted) ++generating_pairs_[text];
  }
}

void PatternStats::Merge(const PatternStats& other) {
  if (other.rows_.size() != rows_.size()) {
    throw InternalError("merging pattern statistics over different pair lists");
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [text, count] : other.rows_[r]) {
      auto [it, inserted] = rows_[r].try_emplace(text, 0);
      it->second += count;
      if (inserted) ++generating_pairs_[text];
    }
  }
}

std::uint32_t PatternStats::GeneratingPairs(const std::string& pattern) const {
  auto it = generating_pairs_.find(pattern);
  return it == generating_pairs_.end() ? 0 : it->second;
}

std::uint32_t PatternStats::Count(std::size_t row,
                                  const std::string& pattern) const {
  const auto& counts = rows_.at(row);
  auto it = counts.find(pattern);
  return it == counts.end() ? 0 : it->second;
}

std::vector<std::size_t> PruneRows(std::span<const TermPair> pairs,
                                   std::span<const std::size_t> phrase_counts) {
  if (pairs.size() != phrase_counts.size()) {
    throw InternalError("phrase counts do not match the pair list");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < pairs.size(); ++i) position[pairs[i].key()] = i;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    bool has = phrase_counts[i] > 0;
    if (!has) {
      auto it = position.find(pairs[i].Reversed().key());
      has = it != position.end() && phrase_counts[it->second] > 0;
    }
    if (has) kept.push_back(i);
  }
  return kept;
}

std::vector<Pattern> SelectColumns(const PatternStats& stats, int t,
                                   std::size_t n_r) {
  if (t <= 0) throw UsageError("column factor t must be positive");
  std::vector<std::pair<std::uint32_t, const std::string*>> ranked;
  ranked.reserve(stats.pattern_count());
  for (const auto& [text, count] : stats.generating_pairs()) {
    ranked.emplace_back(count, &text);
  }
  const std::size_t limit =
      std::min(ranked.size(), static_cast<std::size_t>(t) * n_r);
  auto before = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  };
  std::partial_sort(ranked.begin(),
                    ranked.begin() + static_cast<std::ptrdiff_t>(limit),
                    ranked.end(), before);
  std::vector<Pattern> cols;
  cols.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) {
    cols.push_back(Pattern::Parse(*ranked[i].second));
  }
  return cols;
}

SparseMatrix BuildFrequencyMatrix(std::span<const std::size_t> rows,
                                  std::span<const Pattern> cols,
                                  const PatternStats& stats) {
  std::unordered_map<std::string, std::uint32_t> col_of;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!col_of.emplace(cols[j].str(), static_cast<std::uint32_t>(j)).second) {
      throw InternalError("duplicate column pattern '" + cols[j].str() + "'");
    }
  }
  std::unordered_set<std::size_t> seen_rows;
  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!seen_rows.insert(rows[i]).second) {
      throw InternalError("duplicate row in frequency matrix");
    }
    for (const auto& [text, count] : stats.Row(rows[i])) {
      auto it = col_of.find(text);
      if (it != col_of.end()) {
        triplets.push_back({static_cast<std::uint32_t>(i), it->second,
                            static_cast<double>(count)});
      }
    }
  }
  return SparseMatrix::FromTriplets(rows.size(), cols.size(),
                                    std::move(triplets));
}

MinedPatterns MinePatterns(const CorpusIndex& index,
                           std::span<const MappingProblem> problems,
                           const MiningOptions& options) {
  MinedPatterns mined;
  mined.pairs = BuildPairList(problems);
  mined.stats = PatternStats(mined.pairs.size());
  mined.phrase_counts.assign(mined.pairs.size(), 0);
  for (std::size_t r = 0; r < mined.pairs.size(); ++r) {
    const auto phrases =
        SearchPhrases(index, mined.pairs[r], options.max_phrases_per_pair);
    mined.phrase_counts[r] = phrases.size();
    mined.total_phrases += phrases.size();
    for (const auto& phrase : phrases) {
      WindowView view = ViewOf(index, phrase);
      mined.stats.AddPhrase(
          r, GeneratePatternStrings(view.words, view.x_span, view.y_span,
                                    mined.pairs[r]));
    }
  }
  mined.kept_rows = PruneRows(mined.pairs, mined.phrase_counts);
  return mined;
}

PairPatternMatrix AssembleMatrix(const MinedPatterns& mined, int t) {
  PairPatternMatrix out;
  out.cols = SelectColumns(mined.stats, t, mined.kept_rows.size());
  for (std::size_t r : mined.kept_rows) out.rows.push_back(mined.pairs[r]);
  out.frequencies =
      BuildFrequencyMatrix(mined.kept_rows, out.cols, mined.stats);
  return out;
}

}  // namespace lrme
