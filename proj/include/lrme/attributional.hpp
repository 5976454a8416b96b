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

#ifndef LRME_ATTRIBUTIONAL_HPP_
#define LRME_ATTRIBUTIONAL_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "lrme/term.hpp"

namespace lrme {

class CorpusIndex;
struct MappingProblem;

// Attributional similarity sim_a between two individual terms. Lookups never
// fail: unknown terms yield 0. Implementations are immutable and symmetric.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual std::string name() const = 0;
  virtual double Similarity(const Term& a, const Term& b) const = 0;
};

using ProviderPtr = std::shared_ptr<const SimilarityProvider>;

// Term key -> part-of-speech tag.
using PosTags = std::unordered_map<std::string, std::string>;

// Tags of every term in the problems that carry them. Throws DataError when a
// term is tagged inconsistently.
PosTags CollectPosTags(std::span<const MappingProblem> problems);
// `term<TAB>tag` lines.
PosTags LoadPosTags(const std::filesystem::path& path);

// 100 when a = b, 10 when the tags match, 0 otherwise (including untagged
// terms, which log a warning once per term).
class PosSimilarity : public SimilarityProvider {
 public:
  explicit PosSimilarity(PosTags tags);
  std::string name() const override { return "pos"; }
  double Similarity(const Term& a, const Term& b) const override;

 private:
  PosTags tags_;
};

inline constexpr std::uint32_t kDefaultPmiWindow = 10;

// log(((count_ab + 1) * N) / (2 * window * count_a * count_b)) over corpus
// co-occurrence counts within a token window, N = total corpus tokens. Close
// to 0 for independent terms; 0 when either term never occurs.
class PmiIrSimilarity : public SimilarityProvider {
 public:
  PmiIrSimilarity(std::shared_ptr<const CorpusIndex> corpus,
                  std::uint32_t window = kDefaultPmiWindow);
  std::string name() const override { return "pmi-ir"; }
  double Similarity(const Term& a, const Term& b) const override;

 private:
  std::shared_ptr<const CorpusIndex> corpus_;
  std::uint32_t window_;
};

// Symmetric lookup table read from `term_a<TAB>term_b<TAB>score` lines.
class TableSimilarity : public SimilarityProvider {
 public:
  TableSimilarity(std::string name,
                  std::unordered_map<std::string, double> scores)
      : name_(std::move(name)), scores_(std::move(scores)) {}
  std::string name() const override { return name_; }
  double Similarity(const Term& a, const Term& b) const override;
  std::size_t size() const { return scores_.size(); }

 private:
  std::string name_;
  std::unordered_map<std::string, double> scores_;  // keyed by TermPair key
};

// Throws DataError with the line number for malformed lines. A later line for
// the same pair overrides an earlier one, with a warning when they disagree.
std::shared_ptr<TableSimilarity> LoadExternalSimilarity(
    const std::filesystem::path& path);

// base(a, b) + pos(a, b).
class SumSimilarity : public SimilarityProvider {
 public:
  SumSimilarity(ProviderPtr base, ProviderPtr pos)
      : base_(std::move(base)), pos_(std::move(pos)) {}
  std::string name() const override {
    return base_->name() + "+" + pos_->name();
  }
  double Similarity(const Term& a, const Term& b) const override {
    return base_->Similarity(a, b) + pos_->Similarity(a, b);
  }

 private:
  ProviderPtr base_;
  ProviderPtr pos_;
};

ProviderPtr CombineWithPos(ProviderPtr base, ProviderPtr pos);

// Builds a provider from a spec string: "pos", "pmi-ir", "external:<path>",
// or any of the latter two followed by "+pos". `corpus` is required for
// PMI-IR. Throws UsageError on unknown specs.
ProviderPtr MakeProvider(std::string_view spec, const PosTags& tags,
                         std::shared_ptr<const CorpusIndex> corpus,
                         std::uint32_t pmi_window = kDefaultPmiWindow);

}  // namespace lrme

#endif  // LRME_ATTRIBUTIONAL_HPP_
