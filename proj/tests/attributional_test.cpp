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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "lrme/attributional.hpp"
#include "lrme/corpus.hpp"
#include "lrme/dataset.hpp"
#include "lrme/error.hpp"

namespace lrme {
namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lrme_attr_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".tsv");
    std::ofstream(path_, std::ios::binary) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::shared_ptr<const CorpusIndex> IndexOf(const std::string& text) {
  const std::vector<std::string> names{"doc"};
  const std::vector<std::string> texts{text};
  return std::make_shared<const CorpusIndex>(CorpusIndex::FromTexts(names, texts));
}

TEST(Pos, WorkedExamples) {
  const PosSimilarity pos(CollectPosTags(BuiltinProblems()));
  EXPECT_EQ(pos.Similarity(Term("attracts"), Term("attracts")), 100.0);
  EXPECT_EQ(pos.Similarity(Term("sun"), Term("nucleus")), 10.0);
  EXPECT_EQ(pos.Similarity(Term("sun"), Term("revolves")), 0.0);
  EXPECT_EQ(pos.Similarity(Term("nucleus"), Term("sun")), 10.0);
}

TEST(Pos, MissingTagsScoreZero) {
  const PosSimilarity pos(PosTags{{"sun", "NN"}});
  EXPECT_EQ(pos.Similarity(Term("sun"), Term("unknown")), 0.0);
  EXPECT_EQ(pos.Similarity(Term("unknown"), Term("unknown")), 100.0);
}

TEST(Pos, RangeAndSymmetryOverTheBuiltinVocabulary) {
  const auto& problems = BuiltinProblems();
  for (const MappingProblem& p : problems) {
    PosTags tags;
    for (int i = 0; i < p.m(); ++i) {
      tags[p.source[i].key()] = p.source_pos[i];
      tags[p.target[i].key()] = p.target_pos[i];
    }
    const PosSimilarity pos(tags);
    for (const auto* list : {&p.source, &p.target}) {
      for (const Term& a : *list) {
        for (const Term& b : p.target) {
          const double v = pos.Similarity(a, b);
          EXPECT_TRUE(v == 0.0 || v == 10.0 || v == 100.0);
          EXPECT_EQ(v, pos.Similarity(b, a));
        }
        EXPECT_EQ(pos.Similarity(a, a), 100.0);
      }
    }
  }
}

TEST(Pos, TagFileLoading) {
  const TempFile good("sun\tNN\nsolar system\tNN\r\n\nrevolves\tVBZ\n");
  const PosTags tags = LoadPosTags(good.path());
  EXPECT_EQ(tags.size(), 3u);
  EXPECT_EQ(tags.at("solar system"), "NN");
  const TempFile bad("sun\tNN\nbroken line\n");
  try {
    LoadPosTags(bad.path());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(PmiIr, HandEvaluation) {
  // a and b occur once each, adjacent, in a 12-token corpus.
  const auto index = IndexOf("w0 w1 w2 w3 w4 apple banana w5 w6 w7 w8 w9");
  const PmiIrSimilarity pmi(index, 10);
  const double expected = std::log((1.0 + 1.0) * 12.0 / (2.0 * 10.0 * 1.0 * 1.0));
  EXPECT_NEAR(pmi.Similarity(Term("apple"), Term("banana")), expected, 1e-12);
  EXPECT_EQ(pmi.Similarity(Term("apple"), Term("cherry")), 0.0);
  EXPECT_EQ(pmi.Similarity(Term("apple"), Term("banana")),
            pmi.Similarity(Term("banana"), Term("apple")));
  EXPECT_THROW(PmiIrSimilarity(index, 0), UsageError);
  EXPECT_THROW(PmiIrSimilarity(nullptr), UsageError);
}

TEST(PmiIr, IndependentTermsScoreNearZero) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> word(0, 99);
  std::string text;
  for (int i = 0; i < 200000; ++i) {
    text += "v" + std::to_string(word(rng));
    text += ' ';
  }
  const PmiIrSimilarity pmi(IndexOf(text), 10);
  for (int pair = 0; pair < 10; ++pair) {
    const double v = pmi.Similarity(Term("v" + std::to_string(pair)),
                                    Term("v" + std::to_string(pair + 50)));
    EXPECT_NEAR(v, 0.0, 0.5);
  }
}

TEST(PmiIr, AssociatedTermsScoreHigherThanIndependentOnes) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> word(0, 99);
  std::string text;
  for (int i = 0; i < 50000; ++i) {
    text += "v" + std::to_string(word(rng)) + " ";
    if (i % 100 == 0) text += "salt pepper ";
  }
  const PmiIrSimilarity pmi(IndexOf(text), 10);
  EXPECT_GT(pmi.Similarity(Term("salt"), Term("pepper")),
            pmi.Similarity(Term("salt"), Term("v3")) + 1.0);
}

TEST(External, LoadsSymmetricScores) {
  const TempFile table("sun\tnucleus\t2.5\nplanet\telectron\t1e-1\n");
  const auto provider = LoadExternalSimilarity(table.path());
  EXPECT_EQ(provider->Similarity(Term("sun"), Term("nucleus")), 2.5);
  EXPECT_EQ(provider->Similarity(Term("nucleus"), Term("sun")), 2.5);
  EXPECT_EQ(provider->Similarity(Term("electron"), Term("planet")), 0.1);
  EXPECT_EQ(provider->Similarity(Term("sun"), Term("electron")), 0.0);
}

TEST(External, EmptyFileIsZeroEverywhere) {
  const TempFile table("");
  const auto provider = LoadExternalSimilarity(table.path());
  EXPECT_EQ(provider->size(), 0u);
  EXPECT_EQ(provider->Similarity(Term("a"), Term("b")), 0.0);
}

TEST(External, LastDuplicateWins) {
  const TempFile table("sun\tnucleus\t2.5\nnucleus\tsun\t4\n");
  const auto provider = LoadExternalSimilarity(table.path());
  EXPECT_EQ(provider->Similarity(Term("sun"), Term("nucleus")), 4.0);
  EXPECT_EQ(provider->Similarity(Term("nucleus"), Term("sun")), 4.0);
}

TEST(External, ErrorsCarryLineNumbers) {
  for (const std::string& content :
       {std::string("a\tb\t1\na\tb\n"), std::string("a\tb\t1\na\tb\tlots\n"),
        std::string("a\tb\t1\n\t b\t1\n")}) {
    const TempFile table(content);
    try {
      LoadExternalSimilarity(table.path());
      FAIL() << content;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(LoadExternalSimilarity("/nonexistent/table.tsv"), DataError);
}

TEST(Combine, AddsExactly) {
  const TempFile table("sun\tnucleus\t2.5\nsun\trevolves\t0.3\n");
  const ProviderPtr base = LoadExternalSimilarity(table.path());
  const ProviderPtr pos = std::make_shared<PosSimilarity>(
      PosTags{{"sun", "NN"}, {"nucleus", "NN"}, {"revolves", "VBZ"}});
  const ProviderPtr both = CombineWithPos(base, pos);
  EXPECT_EQ(both->Similarity(Term("sun"), Term("nucleus")), 12.5);
  EXPECT_EQ(both->name(), "external+pos");
  const std::vector<std::string> words{"sun", "nucleus", "revolves", "other"};
  for (const auto& a : words) {
    for (const auto& b : words) {
      const Term ta(a), tb(b);
      EXPECT_EQ(both->Similarity(ta, tb) - base->Similarity(ta, tb) -
                    pos->Similarity(ta, tb),
                0.0);
    }
  }
  const ProviderPtr zero = std::make_shared<TableSimilarity>(
      "zero", std::unordered_map<std::string, double>{});
  const ProviderPtr only_pos = CombineWithPos(zero, pos);
  EXPECT_EQ(only_pos->Similarity(Term("sun"), Term("sun")), 100.0);
  EXPECT_EQ(only_pos->Similarity(Term("sun"), Term("revolves")), 0.0);
}

TEST(Provider, SpecStrings) {
  const PosTags tags{{"sun", "NN"}};
  EXPECT_EQ(MakeProvider("pos", tags, nullptr)->name(), "pos");
  const auto index = IndexOf("sun planet moon");
  EXPECT_EQ(MakeProvider("pmi-ir", tags, index)->name(), "pmi-ir");
  EXPECT_EQ(MakeProvider("pmi-ir+pos", tags, index)->name(), "pmi-ir+pos");
  const TempFile table("a\tb\t1\n");
  EXPECT_EQ(MakeProvider("external:" + table.path().string() + "+pos", tags,
                         nullptr)->Similarity(Term("a"), Term("b")),
            1.0);
  EXPECT_THROW(MakeProvider("pmi-ir", tags, nullptr), UsageError);
  EXPECT_THROW(MakeProvider("wordnet", tags, nullptr), UsageError);
  EXPECT_THROW(MakeProvider("pos+pos", tags, nullptr), UsageError);
  EXPECT_THROW(MakeProvider("external:", tags, nullptr), UsageError);
}

}  // namespace
}  // namespace lrme
