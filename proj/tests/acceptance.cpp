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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "lrme/attributional.hpp"
#include "lrme/dataset.hpp"
#include "lrme/evaluation.hpp"
#include "lrme/patterns.hpp"
#include "lrme/relation_space.hpp"
#include "lrme/solver.hpp"
#include "support/planted.hpp"

namespace lrme {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;

  void Require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

MappingProblem Numbered(int m) {
  MappingProblem p;
  p.id = "R" + std::to_string(m);
  for (int i = 0; i < m; ++i) {
    p.source.emplace_back("s" + std::to_string(i));
    p.target.emplace_back("t" + std::to_string(i));
  }
  return p;
}

// Heap's algorithm.
void Heap(int n, std::vector<int>& a, const std::function<void(const std::vector<int>&)>& f) {
  if (n <= 1) {
    f(a);
    return;
  }
  for (int i = 0; i < n - 1; ++i) {
    Heap(n - 1, a, f);
    std::swap(a[n % 2 == 0 ? i : 0], a[n - 1]);
  }
  Heap(n - 1, a, f);
}

Verdict SolverOracle() {
  Verdict v;
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 2);
  const auto start = Clock::now();
  for (int m = 2; m <= 6; ++m) {
    for (int trial = 0; trial < 100; ++trial) {
      const bool tied = trial % 2 == 1;
      const RelationalTable table = RelationalTable::FromFunction(m, [&](int, int, int, int) {
        return tied ? coarse(rng) * 0.5 : real(rng);
      });
      double best = -1e300;
      std::vector<std::pair<double, std::vector<int>>> all;
      std::vector<int> a(static_cast<std::size_t>(m));
      std::iota(a.begin(), a.end(), 0);
      Heap(m, a, [&](const std::vector<int>& p) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) s += table.at(i, j, p[i], p[j]);
        all.emplace_back(s, p);
        best = std::max(best, s);
      });
      std::set<std::vector<int>> argmax;
      for (const auto& [s, p] : all)
        if (std::abs(s - best) <= kTieTolerance) argmax.insert(p);
      const SolveResult r = Solve(Numbered(m), Scorer::Relational(table),
                                  {TieBreak::Random(static_cast<std::uint64_t>(trial))});
      const std::string where = fmt::format("m={} trial={}", m, trial);
      v.Require(r.score == best, where + ": score differs from the oracle");
      v.Require(argmax.count(r.mapping.perm) == 1, where + ": mapping not in the tied set");
    }
  }
  const double seconds = Seconds(start);
  v.Require(seconds < 10.0, fmt::format("took {:.2f} s", seconds));
  if (v.ok) v.detail = fmt::format("500 tables in {:.2f} s", seconds);
  return v;
}

SparseMatrix RandomCounts(std::mt19937& rng, int rows, int cols, double zero_share) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 9);
  std::vector<Triplet> triplets;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (coin(rng) >= zero_share)
        triplets.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                            static_cast<double>(count(rng))});
  return SparseMatrix::FromTriplets(rows, cols, std::move(triplets));
}

Verdict PpmicConformance() {
  Verdict v;
  std::mt19937 rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SparseMatrix f = RandomCounts(rng, 20, 50, 0.6);
    const Eigen::MatrixXd d = f.ToDense();
    const Eigen::MatrixXd x = TransformPpmic(f).ToDense();
    const double total = d.sum();
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 50; ++j) {
        double expected = 0.0;
        if (d(i, j) > 0.0) {
          const double pmi = std::log((d(i, j) / total) /
                                      ((d.row(i).sum() / total) * (d.col(j).sum() / total)));
          expected = std::max(pmi, 0.0);
        }
        worst = std::max(worst, std::abs(x(i, j) - expected));
      }
    }
    v.Require(TransformPpmic(f).nonzeros() <= f.nonzeros(), "nnz increased");
  }
  v.Require(worst <= 1e-9, fmt::format("max |delta| {:.3g}", worst));
  for (int rows : {1, 5, 20}) {
    const Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(rows, 50, 4.0);
    v.Require(TransformPpmic(SparseMatrix::FromDense(uniform)).nonzeros() == 0,
              "uniform matrix left nonzeros");
  }
  if (v.ok) v.detail = fmt::format("50 matrices, max |delta| {:.2g}", worst);
  return v;
}

Verdict SvdContracts() {
  Verdict v;
  std::mt19937 rng(30);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double ortho = 0.0, full_error = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SparseMatrix sparse = RandomCounts(rng, 30, 80, 0.7);
    const Eigen::MatrixXd x = sparse.ToDense();
    const int k = 3 + trial;
    const TruncatedSvd svd = ComputeTruncatedSvd(sparse, k, true);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
    ortho = std::max({ortho, (svd.u.transpose() * svd.u - eye).cwiseAbs().maxCoeff(),
                      (svd.v.transpose() * svd.v - eye).cwiseAbs().maxCoeff()});
    const double error =
        (svd.u * svd.sigma.asDiagonal() * svd.v.transpose() - x).norm();
    for (int c = 0; c < 50; ++c) {
      Eigen::MatrixXd p(30, k), q(k, 80);
      for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = gauss(rng);
      for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = gauss(rng);
      const Eigen::MatrixXd b = p * q * (x.norm() / (p * q).norm());
      v.Require(error <= (b - x).norm(), fmt::format("trial {}: competitor {} wins", trial, c));
    }
    const TruncatedSvd full = ComputeTruncatedSvd(sparse, 30, true);
    full_error = std::max(
        full_error, (full.u * full.sigma.asDiagonal() * full.v.transpose() - x).norm() / x.norm());
  }
  v.Require(ortho <= 1e-8, fmt::format("orthonormality residual {:.3g}", ortho));
  v.Require(full_error <= 1e-8, fmt::format("reconstruction error {:.3g}", full_error));
  if (v.ok)
    v.detail = fmt::format("residual {:.2g}, reconstruction {:.2g}", ortho, full_error);
  return v;
}

Verdict PatternCombinatorics() {
  Verdict v;
  const auto window = Tokenize("a sun centered solar system illustrates");
  const TermPair pair{Term("sun"), Term("solar system")};
  const auto example = GeneratePatternStrings(window, {1, 2}, {3, 5}, pair);
  v.Require(example.size() == 16, fmt::format("worked example gives {}", example.size()));
  v.Require(std::count(example.begin(), example.end(), "a X centered Y illustrates") == 1,
            "worked example lacks 'a X centered Y illustrates'");
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> pre(0, 1), mid(0, 3), len(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    int next = 0;
    std::vector<std::string> w;
    const int n_pre = pre(rng), n_mid = mid(rng), n_post = pre(rng);
    auto filler = [&](int n) {
      for (int i = 0; i < n; ++i) w.push_back("w" + std::to_string(next++));
    };
    auto term = [&](const char* stem, int n) {
      std::string text;
      for (int i = 0; i < n; ++i) {
        w.push_back(stem + std::to_string(i));
        text += w.back() + ' ';
      }
      return text;
    };
    filler(n_pre);
    const auto xb = static_cast<std::uint32_t>(w.size());
    const std::string x = term("x", len(rng));
    const auto xe = static_cast<std::uint32_t>(w.size());
    filler(n_mid);
    const auto yb = static_cast<std::uint32_t>(w.size());
    const std::string y = term("y", len(rng));
    const auto ye = static_cast<std::uint32_t>(w.size());
    filler(n_post);
    const std::size_t got =
        GeneratePatterns(w, {xb, xe}, {yb, ye}, TermPair{Term(x), Term(y)}).size();
    const std::size_t want = std::size_t{1} << (n_pre + n_mid + n_post + 1);
    v.Require(got == want, fmt::format("trial {}: {} patterns, expected {}", trial, got, want));
  }
  if (v.ok) v.detail = "worked example 16, 200 random phrases exact";
  return v;
}

Verdict PlantedEndToEnd() {
  Verdict v;
  const auto start = Clock::now();
  testing::PlantedOptions options;
  options.problems = 5;
  options.m = 5;
  options.min_tokens = 100000;
  options.seed = 17;
  const auto planted = testing::MakePlantedCorpus(options);
  const std::size_t tokens = planted.TokenCount();
  const Report report = RunBatch({planted.problems, planted.Index()}, Config{});
  for (const ProblemOutcome& o : report.problems) {
    v.Require(o.accuracy && *o.accuracy == 100.0,
              fmt::format("{} at {}", o.id, o.accuracy ? *o.accuracy : -1.0));
  }
  const double seconds = Seconds(start);
  v.Require(tokens >= 100000, fmt::format("corpus has {} tokens", tokens));
  v.Require(seconds < 60.0, fmt::format("took {:.1f} s", seconds));
  if (v.ok) v.detail = fmt::format("{} tokens, 5/5 at 100%, {:.1f} s", tokens, seconds);
  return v;
}

Verdict CoherenceDirection() {
  Verdict v;
  testing::PlantedOptions options;
  options.problems = 5;
  options.m = 7;
  options.keep_edge = testing::CycleEdges(7);
  options.seed = 23;
  const auto planted = testing::MakePlantedCorpus(options);
  Config config;
  config.seed = 5;
  const CoherenceReport report =
      RunCoherenceExperiment({planted.problems, planted.Index()}, 3, 10, config);
  v.Require(report.subproblems.size() == 50, "expected 50 subproblems");
  v.Require(report.total_average && report.internal_average &&
                *report.total_average >= *report.internal_average,
            "total below internal");

  // Attributional scores from corpus co-occurrence, solved under first-tie.
  const PmiIrSimilarity pmi(planted.Index(), kDefaultPmiWindow);
  std::mt19937 rng(9);
  int compared = 0;
  for (const MappingProblem& p : planted.problems) {
    const Scorer scorer = Scorer::Attributional(AttributionalTable::FromProvider(pmi, p));
    std::vector<int> idx(static_cast<std::size_t>(p.m()));
    std::iota(idx.begin(), idx.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> a;
      std::sample(idx.begin(), idx.end(), std::back_inserter(a), 3, rng);
      std::vector<int> b;
      for (int i : a) b.push_back((*p.intended)[static_cast<std::size_t>(i)]);
      const SolveOptions first{TieBreak::First()};
      const auto total = SolveConstrained(p, scorer, a, b, Coherence::kTotal, first);
      const auto internal = SolveConstrained(p, scorer, a, b, Coherence::kInternal, first);
      v.Require(total.sub == internal.sub,
                fmt::format("{} trial {}: attributional sub-mappings differ", p.id, trial));
      ++compared;
    }
  }
  if (v.ok)
    v.detail = fmt::format("total {:.1f} >= internal {:.1f}; {} attributional pairs identical",
                           *report.total_average, *report.internal_average, compared);
  return v;
}

Verdict DatasetFidelity() {
  struct Row {
    const char* id;
    double agreement;
    int m;
  };
  static constexpr Row kRows[] = {
      {"A1", 90.9, 7},  {"A2", 86.9, 8},  {"A3", 81.8, 8},  {"A4", 79.0, 8},
      {"A5", 79.2, 7},  {"A6", 97.4, 7},  {"A7", 74.7, 7},  {"A8", 88.1, 8},
      {"A9", 84.3, 9},  {"A10", 83.6, 5}, {"M1", 93.5, 7},  {"M2", 96.1, 7},
      {"M3", 87.9, 6},  {"M4", 100.0, 7}, {"M5", 77.3, 6},  {"M6", 89.0, 7},
      {"M7", 98.7, 7},  {"M8", 89.1, 5},  {"M9", 96.6, 8},  {"M10", 78.8, 6},
  };
  Verdict v;
  const auto& problems = BuiltinProblems();
  v.Require(problems.size() == 20, fmt::format("{} problems", problems.size()));
  double sum = 0.0;
  for (std::size_t n = 0; n < problems.size() && n < 20; ++n) {
    const MappingProblem& p = problems[n];
    v.Require(p.id == kRows[n].id, "problem order differs at " + p.id);
    v.Require(p.m() == kRows[n].m, p.id + ": wrong m");
    const auto human = p.AverageAgreement();
    v.Require(human && std::abs(*human - kRows[n].agreement) <= 0.1,
              p.id + ": agreement differs");
    sum += human.value_or(0.0);
    v.Require(p.intended.has_value(), p.id + ": no intended mapping");
    if (!p.intended) continue;
    for (int i = 0; i < p.m(); ++i) {
      const std::size_t k = static_cast<std::size_t>((*p.intended)[i]);
      v.Require(p.source_pos[i] == p.target_pos[k],
                p.id + ": intended pair with differing tags at " + p.source[i].key());
    }
  }
  const double average = sum / 20.0;
  v.Require(std::abs(average - 87.6) <= 0.1, fmt::format("human average {:.3f}", average));
  if (v.ok) v.detail = fmt::format("20 problems, human average {:.2f}", average);
  return v;
}

Verdict HybridNormalization() {
  Verdict v;
  std::mt19937 rng(88);
  std::uniform_real_distribution<double> real(-1.0, 1.0), attr(0.0, 10.0);
  std::uniform_int_distribution<int> coarse(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 5;
    const MappingProblem p = Numbered(m);
    const RelationalTable rt =
        RelationalTable::FromFunction(m, [&](int, int, int, int) { return real(rng); });
    const AttributionalTable at =
        AttributionalTable::FromFunction(m, [&](int, int) { return attr(rng); });
    HybridField field;
    SolveHybrid(p, rt, at, trial % 2 ? Combination::kAdd : Combination::kMultiply,
                {TieBreak::Random(trial)}, &field);
    const double sr = std::accumulate(field.prob_r.begin(), field.prob_r.end(), 0.0);
    const double sa = std::accumulate(field.prob_a.begin(), field.prob_a.end(), 0.0);
    v.Require(std::abs(sr - 1.0) <= 1e-9 && std::abs(sa - 1.0) <= 1e-9,
              fmt::format("trial {}: sums {} and {}", trial, sr, sa));

    const RelationalTable flat =
        RelationalTable::FromFunction(m, [](int, int, int, int) { return 0.4; });
    const AttributionalTable ranked =
        AttributionalTable::FromFunction(m, [&](int, int) { return double(coarse(rng)); });
    const TieBreak tb = TieBreak::Random(trial);
    const SolveResult hybrid = SolveHybrid(p, flat, ranked, Combination::kAdd, {tb});
    const SolveResult alone = Solve(p, Scorer::Attributional(ranked), {tb});
    v.Require(hybrid.mapping == alone.mapping && hybrid.tie_count == alone.tie_count,
              fmt::format("trial {}: uniform relational field changed the ranking", trial));
  }
  if (v.ok) v.detail = "100 random fields";
  return v;
}

Verdict AccuracyArithmetic() {
  Verdict v;
  const Mapping intended{"P", {0, 1, 2, 3, 4, 5, 6}};
  const double two_wrong = Accuracy({"P", {0, 1, 2, 3, 4, 6, 5}}, intended);
  v.Require(std::abs(two_wrong - 71.4) <= 0.05, fmt::format("2 of 7 wrong gives {}", two_wrong));
  v.Require(fmt::format("{:.1f}", two_wrong) == "71.4", "display is not 71.4");

  // Solver outputs across random problems: never exactly one source misplaced.
  std::mt19937 rng(71);
  std::uniform_int_distribution<int> coarse(0, 2);
  std::size_t outputs = 0;
  auto check = [&](const Mapping& predicted, const std::vector<int>& truth) {
    const int m = static_cast<int>(truth.size());
    const double acc = Accuracy(predicted, {predicted.problem_id, truth});
    v.Require(std::abs(acc - 100.0 * (m - 1) / m) > 1e-9,
              fmt::format("{} scored (m-1)/m", predicted.problem_id));
    ++outputs;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + trial % 7;
    MappingProblem p = Numbered(m);
    std::vector<int> truth(static_cast<std::size_t>(m));
    std::iota(truth.begin(), truth.end(), 0);
    std::shuffle(truth.begin(), truth.end(), rng);
    const RelationalTable table =
        RelationalTable::FromFunction(m, [&](int, int, int, int) { return coarse(rng) * 1.0; });
    check(Solve(p, Scorer::Relational(table), {TieBreak::Random(trial)}).mapping, truth);
  }
  Config config;
  config.mode = Mode::kAttributional;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    config.seed = seed;
    const Report report = RunBatch({BuiltinProblems(), nullptr}, config);
    for (std::size_t n = 0; n < report.problems.size(); ++n) {
      check(report.problems[n].result.mapping, *BuiltinProblems()[n].intended);
    }
  }
  if (v.ok) v.detail = fmt::format("71.4; {} solver outputs checked", outputs);
  return v;
}

}  // namespace
}  // namespace lrme

int main() {
  spdlog::set_level(spdlog::level::err);
  struct Criterion {
    const char* name;
    lrme::Verdict (*run)();
  };
  const Criterion criteria[] = {
      {"solver-oracle equivalence", lrme::SolverOracle},
      {"ppmic conformance", lrme::PpmicConformance},
      {"svd contracts", lrme::SvdContracts},
      {"pattern combinatorics", lrme::PatternCombinatorics},
      {"planted end-to-end", lrme::PlantedEndToEnd},
      {"coherence direction", lrme::CoherenceDirection},
      {"dataset fidelity", lrme::DatasetFidelity},
      {"hybrid normalization", lrme::HybridNormalization},
      {"accuracy arithmetic", lrme::AccuracyArithmetic},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    lrme::Verdict verdict;
    try {
      verdict = c.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s  (%s)\n", verdict.ok ? "PASS" : "FAIL", c.name,
                verdict.detail.c_str());
    failures += !verdict.ok;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
