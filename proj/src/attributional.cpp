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

#include "lrme/attributional.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "lrme/corpus.hpp"
#include "lrme/error.hpp"
#include "lrme/problem.hpp"

namespace lrme {
namespace {

std::string PairKey(const Term& a, const Term& b) {
  return a.key() + '\t' + b.key();
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) return fields;
    start = tab + 1;
  }
}

void StripCarriageReturn(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void AddTag(PosTags& tags, const Term& term, const std::string& tag) {
  if (tag.empty()) return;
  auto [it, inserted] = tags.emplace(term.key(), tag);
  if (!inserted && it->second != tag) {
    spdlog::warn("term '{}' is tagged both {} and {}; keeping {}", term.key(),
                 it->second, tag, it->second);
  }
}

}  // namespace

PosTags CollectPosTags(std::span<const MappingProblem> problems) {
  PosTags tags;
  for (const MappingProblem& p : problems) {
    for (std::size_t i = 0; i < p.source_pos.size(); ++i) {
      AddTag(tags, p.source[i], p.source_pos[i]);
    }
    for (std::size_t i = 0; i < p.target_pos.size(); ++i) {
      AddTag(tags, p.target[i], p.target_pos[i]);
    }
  }
  return tags;
}

PosTags LoadPosTags(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read tag file '" + path.string() + "'");
  PosTags tags;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    StripCarriageReturn(line);
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 2 || fields[1].empty()) {
      throw DataError(path.string() + ":" + std::to_string(number) +
                      ": expected term<TAB>tag");
    }
    try {
      AddTag(tags, Term(fields[0]), fields[1]);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": " +
                      e.what());
    }
  }
  return tags;
}

PosSimilarity::PosSimilarity(PosTags tags) : tags_(std::move(tags)) {}

double PosSimilarity::Similarity(const Term& a, const Term& b) const {
  if (a == b) return 100.0;
  auto ta = tags_.find(a.key());
  auto tb = tags_.find(b.key());
  if (ta == tags_.end() || tb == tags_.end()) {
    static std::mutex mu;
    static std::unordered_set<std::string> warned;
    const std::string& missing = ta == tags_.end() ? a.key() : b.key();
    std::lock_guard lock(mu);
    if (warned.insert(missing).second) {
      spdlog::warn("no part-of-speech tag for '{}'", missing);
    }
    return 0.0;
  }
  return ta->second == tb->second ? 10.0 : 0.0;
}

PmiIrSimilarity::PmiIrSimilarity(std::shared_ptr<const CorpusIndex> corpus,
                                 std::uint32_t window)
    : corpus_(std::move(corpus)), window_(window) {
  if (!corpus_) throw UsageError("pmi-ir needs a corpus");
  if (window_ < 1) throw UsageError("pmi-ir window must be at least 1");
}

double PmiIrSimilarity::Similarity(const Term& a, const Term& b) const {
  const CooccurrenceCounts counts = CountCooccurrences(*corpus_, a, b, window_);
  if (counts.count_a == 0 || counts.count_b == 0) return 0.0;
  const double n = static_cast<double>(corpus_->total_tokens());
  const double slots = 2.0 * static_cast<double>(window_);
  return std::log((static_cast<double>(counts.count_ab) + 1.0) * n /
                  (slots * static_cast<double>(counts.count_a) *
                   static_cast<double>(counts.count_b)));
}

double TableSimilarity::Similarity(const Term& a, const Term& b) const {
  auto it = scores_.find(PairKey(a, b));
  return it == scores_.end() ? 0.0 : it->second;
}

std::shared_ptr<TableSimilarity> LoadExternalSimilarity(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read similarity table '" + path.string() + "'");
  std::unordered_map<std::string, double> scores;
  std::string line;
  auto fail = [&](std::size_t number, const std::string& what) {
    return DataError(path.string() + ":" + std::to_string(number) + ": " + what);
  };
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    StripCarriageReturn(line);
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw fail(number, "expected term_a<TAB>term_b<TAB>score");
    }
    char* end = nullptr;
    const double score = std::strtod(fields[2].c_str(), &end);
    if (fields[2].empty() || *end != '\0' || !std::isfinite(score)) {
      throw fail(number, "bad score '" + fields[2] + "'");
    }
    std::optional<Term> a, b;
    try {
      a.emplace(fields[0]);
      b.emplace(fields[1]);
    } catch (const DataError& e) {
      throw fail(number, e.what());
    }
    for (const std::string& key : {PairKey(*a, *b), PairKey(*b, *a)}) {
      auto [it, inserted] = scores.emplace(key, score);
      if (!inserted && it->second != score) {
        spdlog::warn("{}:{}: score for '{}' / '{}' replaced ({} -> {})",
                     path.string(), number, a->key(), b->key(), it->second,
                     score);
      }
      it->second = score;
      if (*a == *b) break;
    }
  }
  return std::make_shared<TableSimilarity>("external", std::move(scores));
}

ProviderPtr CombineWithPos(ProviderPtr base, ProviderPtr pos) {
  return std::make_shared<SumSimilarity>(std::move(base), std::move(pos));
}

ProviderPtr MakeProvider(std::string_view spec, const PosTags& tags,
                         std::shared_ptr<const CorpusIndex> corpus,
                         std::uint32_t pmi_window) {
  constexpr std::string_view kPlusPos = "+pos";
  bool with_pos = false;
  std::string_view base = spec;
  if (base.size() > kPlusPos.size() && base.ends_with(kPlusPos)) {
    with_pos = true;
    base.remove_suffix(kPlusPos.size());
  }
  ProviderPtr provider;
  if (base == "pos" && !with_pos) {
    provider = std::make_shared<PosSimilarity>(tags);
  } else if (base == "pmi-ir") {
    if (!corpus) throw UsageError("provider pmi-ir needs --corpus");
    provider = std::make_shared<PmiIrSimilarity>(std::move(corpus), pmi_window);
  } else if (base.starts_with("external:") && base.size() > 9) {
    provider = LoadExternalSimilarity(std::string(base.substr(9)));
  } else {
    throw UsageError("unknown provider '" + std::string(spec) +
                     "' (expected pos, pmi-ir, external:<path>, or one of "
                     "the latter two with +pos)");
  }
  if (with_pos) {
    provider = CombineWithPos(std::move(provider),
                              std::make_shared<PosSimilarity>(tags));
  }
  return provider;
}

}  // namespace lrme
