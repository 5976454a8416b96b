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

#ifndef LRME_SOLVER_HPP_
#define LRME_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrme/problem.hpp"

namespace lrme {

class RelationSpace;
class SimilarityProvider;

inline constexpr int kDefaultMaxTerms = 10;
// Scores within this absolute distance of the maximum are co-maximal.
inline constexpr double kTieTolerance = 1e-12;

std::uint64_t Factorial(int m);

// Throws BudgetError naming m! when m > max_m, UsageError when m < 1.
void CheckBudget(int m, int max_m = kDefaultMaxTerms);

// Calls `visit` with every permutation of 0..m-1 in lexicographic order.
void ForEachPermutation(int m, const std::function<void(std::span<const int>)>& visit,
                        int max_m = kDefaultMaxTerms);

// The permutation with the given lexicographic rank.
std::vector<int> PermutationAtRank(int m, std::uint64_t rank);

// sim_r(a_i:a_j, b_k:b_l) for every i != j and k != l of one problem.
class RelationalTable {
 public:
  explicit RelationalTable(int m = 0);

  static RelationalTable FromSpace(const RelationSpace& space,
                                   const MappingProblem& problem);
  static RelationalTable FromFunction(
      int m, const std::function<double(int, int, int, int)>& sim);

  int m() const { return m_; }
  double at(int i, int j, int k, int l) const {
    return values_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l];
  }
  void set(int i, int j, int k, int l, double v) {
    values_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l] = v;
  }
  // Sub-table over the listed source and target indices, in the given order.
  RelationalTable Restrict(std::span<const int> source,
                           std::span<const int> target) const;

 private:
  int m_;
  std::vector<double> values_;
};

// sim_a(a_i, b_k) for every i, k of one problem.
class AttributionalTable {
 public:
  explicit AttributionalTable(int m = 0);

  static AttributionalTable FromProvider(const SimilarityProvider& provider,
                                         const MappingProblem& problem);
  static AttributionalTable FromFunction(
      int m, const std::function<double(int, int)>& sim);

  int m() const { return m_; }
  double at(int i, int k) const {
    return values_[static_cast<std::size_t>(i) * m_ + k];
  }
  void set(int i, int k, double v) {
    values_[static_cast<std::size_t>(i) * m_ + k] = v;
  }
  AttributionalTable Restrict(std::span<const int> source,
                              std::span<const int> target) const;

 private:
  int m_;
  std::vector<double> values_;
};

// One addend of a mapping score. `j` is -1 for attributional addends.
struct Contribution {
  int i = 0;
  int j = -1;
  double value = 0.0;
};

// score_r(M) = sum_{i<j} sim_r(a_i:a_j, M(a_i):M(a_j)), or
// score_a(M) = sum_i sim_a(a_i, M(a_i)).
class Scorer {
 public:
  enum class Kind { kRelational, kAttributional };

  static Scorer Relational(RelationalTable table);
  static Scorer Attributional(AttributionalTable table);

  Kind kind() const { return kind_; }
  int m() const;
  double Score(std::span<const int> perm) const;
  std::vector<Contribution> Breakdown(std::span<const int> perm) const;
  Scorer Restrict(std::span<const int> source,
                  std::span<const int> target) const;

 private:
  Kind kind_ = Kind::kRelational;
  RelationalTable relational_;
  AttributionalTable attributional_;
};

double ScoreRelational(const RelationSpace& space, const MappingProblem& problem,
                       const Mapping& mapping);
double ScoreAttributional(const SimilarityProvider& provider,
                          const MappingProblem& problem, const Mapping& mapping);

// Ties are resolved either uniformly at random from a seeded generator over
// the lexicographically ordered tied set, or by taking its first element.
struct TieBreak {
  enum class Policy { kRandom, kFirst };
  Policy policy = Policy::kRandom;
  std::uint64_t seed = 0;

  static TieBreak Random(std::uint64_t seed) { return {Policy::kRandom, seed}; }
  static TieBreak First() { return {Policy::kFirst, 0}; }
};

struct SolveDiagnostics {
  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t search_space = 0;  // number of mappings scored
  double elapsed_ms = 0.0;         // not serialized
};

struct SolveResult {
  Mapping mapping;
  double score = 0.0;
  std::uint64_t tie_count = 0;
  std::vector<Contribution> breakdown;
  SolveDiagnostics diagnostics;
};

struct SolveOptions {
  TieBreak tie_break;
  int max_terms = kDefaultMaxTerms;
};

// Exhaustive argmax over all m! bijections.
SolveResult Solve(const MappingProblem& problem, const Scorer& scorer,
                  const SolveOptions& options = {});

enum class Combination { kAdd, kMultiply };
std::string_view CombinationName(Combination c);

// Per-mapping probabilities of the hybrid search, in lexicographic
// permutation order. Exposed for inspection and tests.
struct HybridField {
  std::vector<double> prob_r;
  std::vector<double> prob_a;
  std::vector<double> combined;
};

// Normalizes a score field to probabilities: scores are shifted by their
// minimum when any is negative, then divided by their sum; an all-zero field
// becomes uniform.
std::vector<double> NormalizeScores(std::vector<double> scores);

// prob_r and prob_a over P(A,B), combined as their mean (kAdd) or product
// (kMultiply), then maximized.
SolveResult SolveHybrid(const MappingProblem& problem,
                        const RelationalTable& relational,
                        const AttributionalTable& attributional,
                        Combination combination,
                        const SolveOptions& options = {},
                        HybridField* field = nullptr);

enum class Coherence { kInternal, kTotal };

struct ConstrainedResult {
  SolveResult result;    // full mapping in total mode, sub-mapping otherwise
  std::vector<int> sub;  // sub[q] = position in `fixed_target` chosen for
                         // fixed_source[q]
  std::uint64_t search_space = 0;
};

// Total mode searches every M in P(A,B) with M(A') = B' setwise; internal mode
// searches P(A',B') with only the restricted scorer. Throws DataError when the
// two index lists differ in size, repeat an index, or fall out of range.
ConstrainedResult SolveConstrained(const MappingProblem& problem,
                                   const Scorer& scorer,
                                   std::span<const int> fixed_source,
                                   std::span<const int> fixed_target,
                                   Coherence mode,
                                   const SolveOptions& options = {});

// Quality of the proportional analogy a1:a2 :: b1:b2, i.e. the score of the
// only sensible m = 2 mapping.
double EvaluateProportional(const RelationSpace& space, const Term& a1,
                            const Term& a2, const Term& b1, const Term& b2);

}  // namespace lrme

#endif  // LRME_SOLVER_HPP_
