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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "lrme/dataset.hpp"
#include "lrme/error.hpp"
#include "lrme/patterns.hpp"
#include "support/planted.hpp"

namespace lrme {
namespace {

std::vector<std::string> Words(const std::string& text) { return Tokenize(text); }

TEST(Patterns, WorkedExampleYieldsSixteenPatterns) {
  const auto window = Words("a sun centered solar system illustrates");
  const TermPair pair(Term("sun"), Term("solar system"));
  const auto patterns = GeneratePatternStrings(window, {1, 2}, {3, 5}, pair);
  EXPECT_EQ(patterns.size(), 16u);
  const std::set<std::string> got(patterns.begin(), patterns.end());
  for (const char* expected :
       {"a X centered Y illustrates", "* X centered Y illustrates",
        "* X * Y *", "a Y centered X illustrates", "* Y * X *",
        "a X * Y illustrates"}) {
    EXPECT_TRUE(got.count(expected)) << expected;
  }
}

TEST(Patterns, RandomPhrasesYieldTwoToTheNPlusOne) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> pre(0, 1), mid(0, 3), post(0, 1), len(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    int next_word = 0;
    auto fresh = [&] { return "w" + std::to_string(next_word++); };
    std::vector<std::string> window;
    const int n_pre = pre(rng), n_mid = mid(rng), n_post = post(rng);
    const int x_len = len(rng), y_len = len(rng);
    std::string x_text, y_text;
    for (int i = 0; i < n_pre; ++i) window.push_back(fresh());
    const auto x_begin = static_cast<std::uint32_t>(window.size());
    for (int i = 0; i < x_len; ++i) {
      window.push_back("x" + std::to_string(i));
      x_text += window.back() + " ";
    }
    const auto x_end = static_cast<std::uint32_t>(window.size());
    for (int i = 0; i < n_mid; ++i) window.push_back(fresh());
    const auto y_begin = static_cast<std::uint32_t>(window.size());
    for (int i = 0; i < y_len; ++i) {
      window.push_back("y" + std::to_string(i));
      y_text += window.back() + " ";
    }
    const auto y_end = static_cast<std::uint32_t>(window.size());
    for (int i = 0; i < n_post; ++i) window.push_back(fresh());

    const TermPair pair{Term(x_text), Term(y_text)};
    const auto patterns = GeneratePatterns(window, {x_begin, x_end},
                                           {y_begin, y_end}, pair);
    const int n = n_pre + n_mid + n_post;
    EXPECT_EQ(patterns.size(), std::size_t{1} << (n + 1)) << "trial " << trial;
    for (const Pattern& p : patterns) EXPECT_EQ(Pattern::Parse(p.str()), p);
  }
}

TEST(Patterns, GenerationRejectsSpansThatDoNotHoldThePair) {
  const auto window = Words("a sun centered solar system illustrates");
  const TermPair pair(Term("sun"), Term("planet"));
  EXPECT_THROW(GeneratePatternStrings(window, {1, 2}, {3, 5}, pair),
               InternalError);
}

TEST(Patterns, ParseValidatesTheLayout) {
  EXPECT_NO_THROW(Pattern::Parse("* X a b c Y *"));
  EXPECT_THROW(Pattern::Parse("X a b c d Y"), DataError);
  EXPECT_THROW(Pattern::Parse("a b X Y"), DataError);
  EXPECT_THROW(Pattern::Parse("X Y a b"), DataError);
  EXPECT_THROW(Pattern::Parse("X a"), DataError);
  EXPECT_THROW(Pattern::Parse("X Y X"), DataError);
  EXPECT_EQ(Pattern::Parse("Y * X").slots().front().kind, Pattern::SlotKind::kY);
}

TEST(Patterns, BuiltinPairListIsDeduplicated) {
  const auto& problems = BuiltinProblems();
  std::size_t with_repeats = 0;
  std::set<std::string> distinct;
  for (const MappingProblem& p : problems) {
    for (const auto* list : {&p.source, &p.target}) {
      for (const Term& a : *list) {
        for (const Term& b : *list) {
          if (a == b) continue;
          ++with_repeats;
          distinct.insert(a.key() + "\t" + b.key());
        }
      }
    }
  }
  const auto pairs = BuildPairList(problems);
  EXPECT_EQ(with_repeats, 1720u);
  EXPECT_EQ(pairs.size(), distinct.size());
  EXPECT_EQ(pairs.size(), 1694u);
  const MappingProblem& first = problems.front();
  EXPECT_EQ(pairs.front(), TermPair(first.source[0], first.source[1]));
  EXPECT_EQ(pairs[1], TermPair(first.source[0], first.source[2]));
}

TEST(Patterns, PruneDropsOnlyPairsWithoutPhrasesInEitherOrder) {
  const std::vector<TermPair> pairs{
      {Term("a"), Term("b")}, {Term("b"), Term("a")},
      {Term("a"), Term("c")}, {Term("c"), Term("a")},
      {Term("b"), Term("c")}};
  const std::vector<std::size_t> counts{0, 3, 0, 0, 1};
  EXPECT_EQ(PruneRows(pairs, counts), (std::vector<std::size_t>{0, 1, 4}));
}

TEST(Patterns, ColumnsRankByGeneratingPairsThenText) {
  PatternStats stats(3);
  const std::vector<std::string> common{"X * Y", "X of Y"};
  const std::vector<std::string> rare{"X and Y"};
  const std::vector<std::string> tie_b{"X b Y"};
  const std::vector<std::string> tie_a{"X a Y"};
  for (std::size_t r = 0; r < 3; ++r) stats.AddPhrase(r, common);
  stats.AddPhrase(0, rare);
  stats.AddPhrase(0, rare);
  stats.AddPhrase(1, tie_b);
  stats.AddPhrase(2, tie_a);
  stats.AddPhrase(1, tie_a);
  EXPECT_EQ(stats.GeneratingPairs("X and Y"), 1u);
  EXPECT_EQ(stats.Count(0, "X and Y"), 2u);
  const auto cols = SelectColumns(stats, 1, 3);
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_EQ(cols[0].str(), "X * Y");
  EXPECT_EQ(cols[1].str(), "X of Y");
  EXPECT_EQ(cols[2].str(), "X a Y");
  EXPECT_EQ(SelectColumns(stats, 5, 3).size(), stats.pattern_count());
  EXPECT_THROW(SelectColumns(stats, 0, 3), UsageError);
}

TEST(Patterns, MergeIsCommutative) {
  PatternStats a(2), b(2);
  const std::vector<std::string> p1{"X * Y", "X of Y"}, p2{"X of Y", "Y * X"};
  a.AddPhrase(0, p1);
  b.AddPhrase(0, p2);
  b.AddPhrase(1, p1);
  PatternStats ab = a, ba = b;
  ab.Merge(b);
  ba.Merge(a);
  for (const char* p : {"X * Y", "X of Y", "Y * X"}) {
    EXPECT_EQ(ab.GeneratingPairs(p), ba.GeneratingPairs(p));
    for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(ab.Count(r, p), ba.Count(r, p));
  }
  EXPECT_EQ(ab.Count(0, "X of Y"), 2u);
}

TEST(Patterns, FrequencyMatrixMatchesRecountedOccurrences) {
  testing::PlantedOptions options;
  options.problems = 2;
  options.m = 4;
  options.repeats = 3;
  const auto planted = testing::MakePlantedCorpus(options);
  const auto index = planted.Index();
  const MinedPatterns mined = MinePatterns(*index, planted.problems);
  const PairPatternMatrix matrix = AssembleMatrix(mined, 20);
  ASSERT_EQ(matrix.rows.size(), matrix.frequencies.rows());
  ASSERT_EQ(matrix.cols.size(), matrix.frequencies.cols());
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    std::map<std::string, double> recount;
    for (const auto& phrase : SearchPhrases(*index, matrix.rows[i])) {
      for (const Pattern& p : GeneratePatterns(*index, phrase, matrix.rows[i])) {
        recount[p.str()] += 1.0;
      }
    }
    for (std::size_t j = 0; j < matrix.cols.size(); ++j) {
      const auto it = recount.find(matrix.cols[j].str());
      EXPECT_EQ(matrix.frequencies.at(i, j), it == recount.end() ? 0.0 : it->second);
    }
  }
  // Every planted pair has phrases in both orders, so nothing is pruned.
  EXPECT_EQ(mined.kept_rows.size(), mined.pairs.size());
  EXPECT_EQ(mined.pairs.size(), 2u * 2u * 4u * 3u);
}

}  // namespace
}  // namespace lrme
