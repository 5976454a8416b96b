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

#include "lrme/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lrme/attributional.hpp"
#include "lrme/error.hpp"
#include "lrme/relation_space.hpp"

namespace lrme {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Picks one rank out of `tied` (already in lexicographic order).
std::uint64_t PickTied(const std::vector<std::uint64_t>& tied,
                       const TieBreak& tie_break) {
  if (tie_break.policy == TieBreak::Policy::kFirst || tied.size() == 1) {
    return tied.front();
  }
  std::mt19937_64 rng(tie_break.seed);
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

std::vector<std::uint64_t> TiedRanks(const std::vector<double>& scores,
                                     double tolerance) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::uint64_t> tied;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (scores[r] >= best - tolerance) tied.push_back(r);
  }
  return tied;
}

std::vector<double> ScoreAll(const Scorer& scorer, int max_terms) {
  std::vector<double> scores;
  scores.reserve(Factorial(scorer.m()));
  ForEachPermutation(
      scorer.m(),
      [&](std::span<const int> perm) { scores.push_back(scorer.Score(perm)); },
      max_terms);
  return scores;
}

std::string KindName(Scorer::Kind kind) {
  return kind == Scorer::Kind::kRelational ? "relational" : "attributional";
}

void CheckIndexSet(std::span<const int> indices, int m, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int i : indices) {
    if (i < 0 || i >= m) {
      throw DataError(std::string(what) + " index " + std::to_string(i) +
                      " is out of range");
    }
    if (seen[static_cast<std::size_t>(i)]) {
      throw DataError(std::string(what) + " index " + std::to_string(i) +
                      " is repeated");
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
}

}  // namespace

std::uint64_t Factorial(int m) {
  if (m < 0) throw UsageError("factorial of a negative number");
  if (m > 20) throw BudgetError(std::to_string(m) + "! overflows 64 bits");
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

void CheckBudget(int m, int max_m) {
  if (m > max_m) {
    std::string count = m <= 20 ? std::to_string(Factorial(m)) : "more than 2^64";
    throw BudgetError("refusing to enumerate " + std::to_string(m) + "! = " +
                      count + " mappings (limit is m <= " +
                      std::to_string(max_m) + ")");
  }
}

void ForEachPermutation(int m,
                        const std::function<void(std::span<const int>)>& visit,
                        int max_m) {
  if (m < 0) throw UsageError("permutation size must be non-negative");
  CheckBudget(m, max_m);
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::vector<int> PermutationAtRank(int m, std::uint64_t rank) {
  if (rank >= Factorial(m)) throw InternalError("permutation rank out of range");
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> perm;
  perm.reserve(pool.size());
  for (int left = m; left > 0; --left) {
    const std::uint64_t block = Factorial(left - 1);
    const auto digit = static_cast<std::size_t>(rank / block);
    rank %= block;
    perm.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return perm;
}

RelationalTable::RelationalTable(int m)
    : m_(m), values_(static_cast<std::size_t>(m) * m * m * m, 0.0) {}

RelationalTable RelationalTable::FromSpace(const RelationSpace& space,
                                           const MappingProblem& problem) {
  return FromFunction(problem.m(), [&](int i, int j, int k, int l) {
    return space.Similarity(problem.source[i], problem.source[j],
                            problem.target[k], problem.target[l]);
  });
}

RelationalTable RelationalTable::FromFunction(
    int m, const std::function<double(int, int, int, int)>& sim) {
  RelationalTable table(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          if (k != l) table.set(i, j, k, l, sim(i, j, k, l));
        }
    }
  return table;
}

RelationalTable RelationalTable::Restrict(std::span<const int> source,
                                          std::span<const int> target) const {
  if (source.size() != target.size()) {
    throw DataError("restriction needs equally many source and target terms");
  }
  const int n = static_cast<int>(source.size());
  return FromFunction(n, [&](int i, int j, int k, int l) {
    return at(source[i], source[j], target[k], target[l]);
  });
}

AttributionalTable::AttributionalTable(int m)
    : m_(m), values_(static_cast<std::size_t>(m) * m, 0.0) {}

AttributionalTable AttributionalTable::FromProvider(
    const SimilarityProvider& provider, const MappingProblem& problem) {
  return FromFunction(problem.m(), [&](int i, int k) {
    return provider.Similarity(problem.source[i], problem.target[k]);
  });
}

AttributionalTable AttributionalTable::FromFunction(
    int m, const std::function<double(int, int)>& sim) {
  AttributionalTable table(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) table.set(i, k, sim(i, k));
  return table;
}

AttributionalTable AttributionalTable::Restrict(
    std::span<const int> source, std::span<const int> target) const {
  if (source.size() != target.size()) {
    throw DataError("restriction needs equally many source and target terms");
  }
  return FromFunction(static_cast<int>(source.size()), [&](int i, int k) {
    return at(source[i], target[k]);
  });
}

Scorer Scorer::Relational(RelationalTable table) {
  Scorer s;
  s.kind_ = Kind::kRelational;
  s.relational_ = std::move(table);
  return s;
}

Scorer Scorer::Attributional(AttributionalTable table) {
  Scorer s;
  s.kind_ = Kind::kAttributional;
  s.attributional_ = std::move(table);
  return s;
}

int Scorer::m() const {
  return kind_ == Kind::kRelational ? relational_.m() : attributional_.m();
}

double Scorer::Score(std::span<const int> perm) const {
  const int n = static_cast<int>(perm.size());
  double total = 0.0;
  if (kind_ == Kind::kRelational) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        total += relational_.at(i, j, perm[i], perm[j]);
  } else {
    for (int i = 0; i < n; ++i) total += attributional_.at(i, perm[i]);
  }
  return total;
}

std::vector<Contribution> Scorer::Breakdown(std::span<const int> perm) const {
  const int n = static_cast<int>(perm.size());
  std::vector<Contribution> parts;
  if (kind_ == Kind::kRelational) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        parts.push_back({i, j, relational_.at(i, j, perm[i], perm[j])});
  } else {
    for (int i = 0; i < n; ++i) parts.push_back({i, -1, attributional_.at(i, perm[i])});
  }
  return parts;
}

Scorer Scorer::Restrict(std::span<const int> source,
                        std::span<const int> target) const {
  return kind_ == Kind::kRelational
             ? Relational(relational_.Restrict(source, target))
             : Attributional(attributional_.Restrict(source, target));
}

double ScoreRelational(const RelationSpace& space, const MappingProblem& problem,
                       const Mapping& mapping) {
  if (static_cast<int>(mapping.perm.size()) != problem.m() ||
      !IsPermutation(mapping.perm)) {
    throw DataError("mapping is not a bijection for problem '" + problem.id + "'");
  }
  double total = 0.0;
  for (int i = 0; i < problem.m(); ++i)
    for (int j = i + 1; j < problem.m(); ++j)
      total += space.Similarity(problem.source[i], problem.source[j],
                                problem.target[mapping.perm[i]],
                                problem.target[mapping.perm[j]]);
  return total;
}

double ScoreAttributional(const SimilarityProvider& provider,
                          const MappingProblem& problem, const Mapping& mapping) {
  if (static_cast<int>(mapping.perm.size()) != problem.m() ||
      !IsPermutation(mapping.perm)) {
    throw DataError("mapping is not a bijection for problem '" + problem.id + "'");
  }
  double total = 0.0;
  for (int i = 0; i < problem.m(); ++i)
    total += provider.Similarity(problem.source[i],
                                 problem.target[mapping.perm[i]]);
  return total;
}

SolveResult Solve(const MappingProblem& problem, const Scorer& scorer,
                  const SolveOptions& options) {
  const auto start = Clock::now();
  if (scorer.m() != problem.m()) {
    throw InternalError("scorer size does not match problem '" + problem.id + "'");
  }
  CheckBudget(problem.m(), options.max_terms);
  const std::vector<double> scores = ScoreAll(scorer, options.max_terms);
  const std::vector<std::uint64_t> tied = TiedRanks(scores, kTieTolerance);
  const std::uint64_t chosen = PickTied(tied, options.tie_break);

  SolveResult result;
  result.mapping = {problem.id, PermutationAtRank(problem.m(), chosen)};
  result.score = scores[chosen];
  result.tie_count = tied.size();
  result.breakdown = scorer.Breakdown(result.mapping.perm);
  result.diagnostics = {KindName(scorer.kind()), options.tie_break.seed,
                        scores.size(), ElapsedMs(start)};
  return result;
}

std::string_view CombinationName(Combination c) {
  return c == Combination::kAdd ? "add" : "multiply";
}

std::vector<double> NormalizeScores(std::vector<double> scores) {
  if (scores.empty()) return scores;
  const double low = *std::min_element(scores.begin(), scores.end());
  if (low < 0.0) {
    for (double& s : scores) s -= low;
  }
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (total <= 0.0) {
    std::fill(scores.begin(), scores.end(), 1.0 / static_cast<double>(scores.size()));
    return scores;
  }
  for (double& s : scores) s /= total;
  return scores;
}

SolveResult SolveHybrid(const MappingProblem& problem,
                        const RelationalTable& relational,
                        const AttributionalTable& attributional,
                        Combination combination, const SolveOptions& options,
                        HybridField* field) {
  const auto start = Clock::now();
  if (relational.m() != problem.m() || attributional.m() != problem.m()) {
    throw InternalError("scorer size does not match problem '" + problem.id + "'");
  }
  CheckBudget(problem.m(), options.max_terms);
  const Scorer rel = Scorer::Relational(relational);
  const Scorer att = Scorer::Attributional(attributional);
  std::vector<double> prob_r = NormalizeScores(ScoreAll(rel, options.max_terms));
  std::vector<double> prob_a = NormalizeScores(ScoreAll(att, options.max_terms));

  std::vector<double> combined(prob_r.size());
  for (std::size_t r = 0; r < combined.size(); ++r) {
    combined[r] = combination == Combination::kAdd
                      ? 0.5 * (prob_r[r] + prob_a[r])
                      : prob_r[r] * prob_a[r];
  }
  // Products of probabilities can sit far below any fixed absolute
  // tolerance, so ties are judged relative to the best value.
  const double best = *std::max_element(combined.begin(), combined.end());
  const std::vector<std::uint64_t> tied =
      TiedRanks(combined, kTieTolerance * std::abs(best));
  const std::uint64_t chosen = PickTied(tied, options.tie_break);

  SolveResult result;
  result.mapping = {problem.id, PermutationAtRank(problem.m(), chosen)};
  result.score = combined[chosen];
  result.tie_count = tied.size();
  result.breakdown = {{-1, -1, combined[chosen]}};
  result.diagnostics = {"hybrid-" + std::string(CombinationName(combination)),
                        options.tie_break.seed, combined.size(),
                        ElapsedMs(start)};
  if (field) {
    field->prob_r = std::move(prob_r);
    field->prob_a = std::move(prob_a);
    field->combined = std::move(combined);
  }
  return result;
}

ConstrainedResult SolveConstrained(const MappingProblem& problem,
                                   const Scorer& scorer,
                                   std::span<const int> fixed_source,
                                   std::span<const int> fixed_target,
                                   Coherence mode, const SolveOptions& options) {
  const auto start = Clock::now();
  if (fixed_source.size() != fixed_target.size()) {
    throw DataError("constraint maps " + std::to_string(fixed_source.size()) +
                    " source terms onto " + std::to_string(fixed_target.size()) +
                    " target terms");
  }
  if (fixed_source.empty()) throw DataError("constraint is empty");
  const int m = problem.m();
  CheckIndexSet(fixed_source, m, "constrained source");
  CheckIndexSet(fixed_target, m, "constrained target");

  ConstrainedResult out;
  if (mode == Coherence::kInternal) {
    // Enumerate over ascending indices so tie order agrees with total mode.
    std::vector<int> source(fixed_source.begin(), fixed_source.end());
    std::vector<int> target(fixed_target.begin(), fixed_target.end());
    std::sort(source.begin(), source.end());
    std::sort(target.begin(), target.end());
    MappingProblem sub;
    sub.id = problem.id;
    for (int i : source) sub.source.push_back(problem.source[i]);
    for (int k : target) sub.target.push_back(problem.target[k]);
    const SolveResult sorted = Solve(sub, scorer.Restrict(source, target), options);
    for (int i : fixed_source) {
      const auto ps = std::lower_bound(source.begin(), source.end(), i) - source.begin();
      const int k = target[static_cast<std::size_t>(sorted.mapping.perm[ps])];
      out.sub.push_back(static_cast<int>(
          std::find(fixed_target.begin(), fixed_target.end(), k) - fixed_target.begin()));
    }
    const Scorer restricted = scorer.Restrict(fixed_source, fixed_target);
    out.result = sorted;
    out.result.mapping.perm = out.sub;
    out.result.breakdown = restricted.Breakdown(out.sub);
    out.search_space = sorted.diagnostics.search_space;
    return out;
  }

  CheckBudget(m, options.max_terms);
  std::vector<int> target_slot(static_cast<std::size_t>(m), -1);
  for (std::size_t q = 0; q < fixed_target.size(); ++q) {
    target_slot[static_cast<std::size_t>(fixed_target[q])] = static_cast<int>(q);
  }
  std::vector<std::vector<int>> feasible;
  std::vector<double> scores;
  ForEachPermutation(
      m,
      [&](std::span<const int> perm) {
        for (int i : fixed_source) {
          if (target_slot[static_cast<std::size_t>(perm[i])] < 0) return;
        }
        feasible.emplace_back(perm.begin(), perm.end());
        scores.push_back(scorer.Score(perm));
      },
      options.max_terms);

  const std::vector<std::uint64_t> tied = TiedRanks(scores, kTieTolerance);
  const std::uint64_t chosen = PickTied(tied, options.tie_break);
  SolveResult& result = out.result;
  result.mapping = {problem.id, feasible[chosen]};
  result.score = scores[chosen];
  result.tie_count = tied.size();
  result.breakdown = scorer.Breakdown(result.mapping.perm);
  result.diagnostics = {KindName(scorer.kind()), options.tie_break.seed,
                        scores.size(), ElapsedMs(start)};
  for (int i : fixed_source) {
    out.sub.push_back(target_slot[static_cast<std::size_t>(result.mapping.perm[i])]);
  }
  out.search_space = scores.size();
  return out;
}

double EvaluateProportional(const RelationSpace& space, const Term& a1,
                            const Term& a2, const Term& b1, const Term& b2) {
  return space.Similarity(a1, a2, b1, b2);
}

}  // namespace lrme
